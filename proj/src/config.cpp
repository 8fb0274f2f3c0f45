#include "catlab/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "catlab/errors.hpp"

namespace catlab {

namespace pt = boost::property_tree;

void ExperimentSpec::validate() const {
  params.validate();
  if (initial.kind != InitialKind::kFile && n < static_cast<std::size_t>(params.m) + 1) {
    throw ValidationError("n must be at least m + 1");
  }
  if (ensemble < 1) throw ValidationError("ensemble size must be >= 1");
  if (jobs < 1) throw ValidationError("jobs must be >= 1");
  if (initial.kind == InitialKind::kSpread && initial.diameter < 1) {
    throw ValidationError("spread diameter must be positive");
  }
  if (initial.kind == InitialKind::kFile && initial.path.empty()) {
    throw ValidationError("initial kind 'file' needs a path");
  }
  if (record.persist_radius && *record.persist_radius < 2) {
    throw ValidationError("unsupported separation radius");
  }
}

std::string to_string(InitialKind kind) {
  switch (kind) {
    case InitialKind::kSegment: return "segment";
    case InitialKind::kSpread: return "spread";
    case InitialKind::kFile: return "file";
  }
  return "?";
}

InitialKind parse_initial_kind(const std::string& text) {
  if (text == "segment") return InitialKind::kSegment;
  if (text == "spread") return InitialKind::kSpread;
  if (text == "file") return InitialKind::kFile;
  throw ValidationError("unknown initial kind '" + text + "' (segment|spread|file)");
}

Configuration spread_configuration(std::size_t d, int m, std::size_t n, Coord diameter) {
  const auto cap = static_cast<std::size_t>(2 * m + 1);
  const std::size_t groups = std::min(n, std::max<std::size_t>(2, (n + cap - 1) / cap));
  std::vector<std::size_t> sizes(groups, n / groups);
  for (std::size_t k = 0; k < n % groups; ++k) ++sizes[k];

  const Coord last_start = diameter - static_cast<Coord>(sizes.back()) + 1;
  std::vector<Point> pts;
  Coord previous_end = 0;
  for (std::size_t k = 0; k < groups; ++k) {
    const Coord start =
        groups == 1 ? 0 : static_cast<Coord>(
                              (static_cast<std::int64_t>(last_start) * static_cast<std::int64_t>(k)) /
                              static_cast<std::int64_t>(groups - 1));
    if (k > 0 && start < previous_end + 2) {
      throw ValidationError("spread diameter " + std::to_string(diameter) + " too small for " +
                            std::to_string(n) + " points in " + std::to_string(groups) +
                            " separated groups");
    }
    for (std::size_t i = 0; i < sizes[k]; ++i) {
      Point p(d);
      p[0] = start + static_cast<Coord>(i);
      pts.push_back(p);
    }
    previous_end = start + static_cast<Coord>(sizes[k]) - 1;
  }
  return Configuration(d, std::move(pts));
}

Configuration initial_configuration(const ExperimentSpec& spec) {
  spec.validate();
  const auto d = static_cast<std::size_t>(spec.params.d);
  switch (spec.initial.kind) {
    case InitialKind::kSegment:
      return e1_segment(d, 1, static_cast<Coord>(spec.n));
    case InitialKind::kSpread:
      return spread_configuration(d, spec.params.m, spec.n, spec.initial.diameter);
    case InitialKind::kFile: {
      std::ifstream in(spec.initial.path);
      if (!in) throw ValidationError("cannot open initial file " + spec.initial.path.string());
      auto c = read_configuration(in);
      if (c.dim() != d) throw ValidationError("initial file dimension does not match d");
      if (c.size() <= static_cast<std::size_t>(spec.params.m)) {
        throw ValidationError("state below minimum size");
      }
      return c;
    }
  }
  throw ValidationError("unknown initial kind");
}

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"meta", {"format", "version"}},
      {"params", {"d", "m", "beta"}},
      {"initial", {"kind", "n", "diameter", "path"}},
      {"ensemble", {"steps", "size", "seed", "jobs"}},
      {"outputs", {"dir", "snapshot_stride", "traces", "events", "per_step", "persist_radius"}},
  };
  return s;
}

template <class T>
T get(const pt::ptree& tree, const std::string& key, T fallback) {
  const auto node = tree.get_child_optional(key);
  if (!node) return fallback;
  try {
    return node->get_value<T>();
  } catch (const pt::ptree_bad_data&) {
    throw ValidationError("bad value for '" + key + "': " + node->data());
  }
}

bool get_bool(const pt::ptree& tree, const std::string& key, bool fallback) {
  const auto node = tree.get_child_optional(key);
  if (!node) return fallback;
  const std::string v = node->data();
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ValidationError("bad boolean for '" + key + "': " + v);
}

}  // namespace

ExperimentSpec parse_spec(const std::string& text, const std::filesystem::path& base_dir) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ValidationError(std::string("config parse error: ") + e.message());
  }
  for (const auto& [section, body] : tree) {
    const auto it = schema().find(section);
    if (it == schema().end()) throw ValidationError("unknown config section [" + section + "]");
    if (body.empty() && !body.data().empty()) {
      throw ValidationError("config key outside a section: " + section);
    }
    for (const auto& [key, value] : body) {
      if (!it->second.contains(key)) {
        throw ValidationError("unknown key '" + key + "' in [" + section + "]");
      }
    }
  }
  if (const auto format = tree.get_optional<std::string>("meta.format");
      format && *format != "catlab.experiment") {
    throw ValidationError("unsupported config format '" + *format + "'");
  }

  ExperimentSpec spec;
  spec.params.d = get(tree, "params.d", spec.params.d);
  spec.params.m = get(tree, "params.m", spec.params.m);
  spec.params.beta = get(tree, "params.beta", spec.params.beta);
  spec.initial.kind = parse_initial_kind(get<std::string>(tree, "initial.kind", "spread"));
  spec.n = get<std::size_t>(tree, "initial.n", spec.n);
  spec.initial.diameter = get(tree, "initial.diameter", spec.initial.diameter);
  if (const auto path = tree.get_optional<std::string>("initial.path")) {
    std::filesystem::path p(*path);
    spec.initial.path = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
  }
  spec.steps = get(tree, "ensemble.steps", spec.steps);
  spec.ensemble = get<std::size_t>(tree, "ensemble.size", spec.ensemble);
  spec.master_seed = get(tree, "ensemble.seed", spec.master_seed);
  spec.jobs = get(tree, "ensemble.jobs", spec.jobs);
  spec.out_dir = get<std::string>(tree, "outputs.dir", spec.out_dir.string());
  spec.record.snapshot_stride = get(tree, "outputs.snapshot_stride", spec.record.snapshot_stride);
  spec.record.traces = get_bool(tree, "outputs.traces", spec.record.traces);
  spec.record.events = get_bool(tree, "outputs.events", spec.record.events);
  spec.record.per_step = get_bool(tree, "outputs.per_step", spec.record.per_step);
  if (tree.get_child_optional("outputs.persist_radius")) {
    spec.record.persist_radius = get<int>(tree, "outputs.persist_radius", 0);
  }
  if (spec.initial.kind == InitialKind::kFile) {
    spec.n = initial_configuration(spec).size();
  }
  spec.validate();
  return spec;
}

ExperimentSpec load_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_spec(buffer.str(), path.parent_path());
}

std::string format_spec(const ExperimentSpec& spec) {
  std::ostringstream os;
  os << "[meta]\nformat = catlab.experiment\nversion = 1\n\n";
  os << "[params]\nd = " << spec.params.d << "\nm = " << spec.params.m
     << "\nbeta = " << spec.params.beta << "\n\n";
  os << "[initial]\nkind = " << to_string(spec.initial.kind) << "\nn = " << spec.n
     << "\ndiameter = " << spec.initial.diameter << '\n';
  if (!spec.initial.path.empty()) os << "path = " << spec.initial.path.string() << '\n';
  os << "\n[ensemble]\nsteps = " << spec.steps << "\nsize = " << spec.ensemble
     << "\nseed = " << spec.master_seed << "\njobs = " << spec.jobs << "\n\n";
  os << "[outputs]\ndir = " << spec.out_dir.string()
     << "\nsnapshot_stride = " << spec.record.snapshot_stride
     << "\ntraces = " << (spec.record.traces ? "true" : "false")
     << "\nevents = " << (spec.record.events ? "true" : "false")
     << "\nper_step = " << (spec.record.per_step ? "true" : "false") << '\n';
  if (spec.record.persist_radius) os << "persist_radius = " << *spec.record.persist_radius << '\n';
  return os.str();
}

void apply_env_overrides(ExperimentSpec& spec) {
  if (const char* seed = std::getenv("CATLAB_SEED"); seed && *seed) {
    try {
      spec.master_seed = std::stoull(seed);
    } catch (const std::exception&) {
      throw ValidationError(std::string("bad CATLAB_SEED: ") + seed);
    }
  }
  if (const char* out = std::getenv("CATLAB_OUT"); out && *out) spec.out_dir = out;
}

}  // namespace catlab
