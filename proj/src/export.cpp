#include "catlab/export.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "catlab/errors.hpp"

namespace catlab {

using nlohmann::json;

namespace {

constexpr const char* kTrajectoryFormat = "catlab.trajectory";
constexpr int kVersion = 1;

json point_json(const Point& p) { return json(std::vector<Coord>(p.coords().begin(), p.coords().end())); }

json points_json(std::span<const Point> pts) {
  json out = json::array();
  for (const auto& p : pts) out.push_back(point_json(p));
  return out;
}

Point point_from(const json& j, std::size_t dim) {
  const auto coords = j.get<std::vector<Coord>>();
  if (coords.size() != dim) throw ValidationError("point of wrong dimension in trajectory file");
  return Point::from(coords);
}

std::vector<Point> points_from(const json& j, std::size_t dim) {
  std::vector<Point> out;
  for (const auto& p : j) out.push_back(point_from(p, dim));
  return out;
}

json event_names(std::uint8_t events) {
  json out = json::array();
  if (events & kEventDepleteSmallComps) out.push_back("deplete_small_comps");
  if (events & kEventNoSmallComp) out.push_back("no_small_comp");
  if (events & kEventAddToBall) out.push_back("add_to_ball");
  if (events & kEventCanPersist) out.push_back("can_persist");
  return out;
}

// 17 significant digits read back as the same double.
std::string num(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

}  // namespace

void write_trajectories_jsonl(std::ostream& os, std::span<const TrajectoryRecord> records) {
  os << json{{"format", kTrajectoryFormat}, {"version", kVersion}, {"records", records.size()}}.dump()
     << '\n';
  for (const auto& r : records) {
    const std::size_t dim = r.initial.dim();
    os << json{{"kind", "record"},
               {"d", r.params.d},
               {"m", r.params.m},
               {"beta", r.params.beta},
               {"master_seed", r.master_seed},
               {"stream_id", r.stream_id},
               {"steps", r.steps},
               {"dim", dim},
               {"initial", points_json(r.initial.points())},
               {"final", points_json(r.final_state.points())},
               {"rows", r.rows.size()},
               {"snapshots", r.snapshots.size()},
               {"traces", r.traces.size()}}
              .dump()
       << '\n';
    for (const auto& row : r.rows) {
      os << json{{"kind", "row"},
                 {"t", row.t},
                 {"diameter", row.diameter()},
                 {"diameter_sq", row.diameter_sq},
                 {"n_components", row.n_components},
                 {"events", row.events},
                 {"event_names", event_names(row.events)}}
                .dump()
         << '\n';
    }
    for (const auto& s : r.snapshots) {
      os << json{{"kind", "snapshot"}, {"t", s.t}, {"points", points_json(s.state.points())}}.dump()
         << '\n';
    }
    for (std::size_t k = 0; k < r.traces.size(); ++k) {
      os << json{{"kind", "trace"},
                 {"t", k + 1},
                 {"activated", points_json(r.traces[k].activated)},
                 {"transported", points_json(r.traces[k].transported)}}
                .dump()
         << '\n';
    }
  }
}

std::vector<TrajectoryRecord> read_trajectories_jsonl(std::istream& is) {
  std::string line;
  const auto next_json = [&](const char* kind) {
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      json j;
      try {
        j = json::parse(line);
      } catch (const json::parse_error& e) {
        throw ValidationError(std::string("bad trajectory line: ") + e.what());
      }
      if (kind && j.value("kind", std::string()) != kind) {
        throw ValidationError(std::string("expected a '") + kind + "' line in trajectory file");
      }
      return j;
    }
    throw ValidationError("truncated trajectory file");
  };

  std::vector<TrajectoryRecord> out;
  try {
    const json header = next_json(nullptr);
    if (header.value("format", std::string()) != kTrajectoryFormat) {
      throw ValidationError("not a catlab.trajectory file");
    }
    if (header.value("version", 0) != kVersion) throw ValidationError("unsupported trajectory version");
    const auto count = header.at("records").get<std::size_t>();
    for (std::size_t i = 0; i < count; ++i) {
      const json rec = next_json("record");
      TrajectoryRecord r;
      r.params.d = rec.at("d").get<int>();
      r.params.m = rec.at("m").get<int>();
      r.params.beta = rec.at("beta").get<double>();
      r.master_seed = rec.at("master_seed").get<std::uint64_t>();
      r.stream_id = rec.at("stream_id").get<std::uint64_t>();
      r.steps = rec.at("steps").get<std::uint64_t>();
      const auto dim = rec.at("dim").get<std::size_t>();
      r.initial = Configuration(dim, points_from(rec.at("initial"), dim));
      r.final_state = Configuration(dim, points_from(rec.at("final"), dim));
      const auto n_rows = rec.at("rows").get<std::size_t>();
      const auto n_snaps = rec.at("snapshots").get<std::size_t>();
      const auto n_traces = rec.at("traces").get<std::size_t>();
      for (std::size_t k = 0; k < n_rows; ++k) {
        const json j = next_json("row");
        r.rows.push_back(StepRow{j.at("t").get<std::uint64_t>(),
                                 j.at("diameter_sq").get<SquaredLength>(),
                                 j.at("n_components").get<std::uint32_t>(),
                                 j.at("events").get<std::uint8_t>()});
      }
      for (std::size_t k = 0; k < n_snaps; ++k) {
        const json j = next_json("snapshot");
        r.snapshots.push_back(
            Snapshot{j.at("t").get<std::uint64_t>(), Configuration(dim, points_from(j.at("points"), dim))});
      }
      for (std::size_t k = 0; k < n_traces; ++k) {
        const json j = next_json("trace");
        r.traces.push_back(
            StepTrace{points_from(j.at("activated"), dim), points_from(j.at("transported"), dim)});
      }
      out.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("bad trajectory file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ValidationError(std::string("bad trajectory file: ") + e.what());
  }
  return out;
}

void write_diameter_csv(std::ostream& os, std::span<const TrajectoryRecord> records) {
  os << "# catlab.diameter v1\n";
  os << "stream_id,t,diameter_sq,diameter,n_components,events\n";
  for (const auto& r : records) {
    for (const auto& row : r.rows) {
      os << r.stream_id << ',' << row.t << ',' << row.diameter_sq << ',' << num(row.diameter())
         << ',' << row.n_components << ',' << static_cast<unsigned>(row.events) << '\n';
    }
  }
}

void write_sweep_csv(std::ostream& os, const SweepResult& result) {
  os << "# catlab.sweep v1\n";
  os << "m,n,seed,level,initial_diameter,min_diameter,final_diameter,late_min_diameter,"
        "visits_below,collapse,growth\n";
  for (const auto& cell : result.cells) {
    for (std::size_t s = 0; s < cell.seeds.size(); ++s) {
      const auto& v = cell.seeds[s];
      os << cell.m << ',' << cell.n << ',' << s << ',' << num(cell.level) << ','
         << num(v.initial_diameter) << ',' << num(v.min_diameter) << ',' << num(v.final_diameter)
         << ',' << num(v.late_min_diameter) << ',' << v.visits_below << ',' << int{v.collapse}
         << ',' << int{v.growth} << '\n';
    }
  }
}

void write_sweep_cells_csv(std::ostream& os, const SweepResult& result) {
  os << "# catlab.sweep_cells v1\n";
  os << "m,n,defined,seeds,level,collapse_fraction,growth_fraction,median_min_diameter,"
        "median_final_diameter,collapse_dominant,growth_dominant,median_collapse,median_growth\n";
  for (const auto& c : result.cells) {
    os << c.m << ',' << c.n << ',' << int{c.defined} << ',' << c.seeds.size() << ','
       << num(c.level) << ',' << num(c.collapse_fraction) << ',' << num(c.growth_fraction) << ','
       << num(c.median_min_diameter) << ',' << num(c.median_final_diameter) << ','
       << int{c.collapse_dominant} << ',' << int{c.growth_dominant} << ','
       << int{c.median_collapse} << ',' << int{c.median_growth} << '\n';
  }
}

void write_walk_csv(std::ostream& os, const RenewalSeries& series, std::span<const Point> walk,
                    std::size_t dim) {
  if (walk.size() > series.size()) throw ValidationError("walk longer than the renewal series");
  os << "# catlab.walk v1\n";
  os << "k,xi";
  for (std::size_t a = 0; a < dim; ++a) os << ",S" << a + 1;
  os << '\n';
  for (std::size_t k = 0; k < walk.size(); ++k) {
    os << k << ',' << series.times[k];
    for (std::size_t a = 0; a < dim; ++a) os << ',' << walk[k][a];
    os << '\n';
  }
}

void write_copycat_csv(std::ostream& os, const CopyTrajectory& run) {
  os << "# catlab.copycat v1\n";
  os << "t,chosen,sep,renewal\n";
  for (const auto& row : run.rows) {
    os << row.t << ',' << row.chosen << ',' << num(row.sep) << ',' << int{row.renewal} << '\n';
  }
}

void write_stationarity_csv(std::ostream& os, const StationarityReport& report) {
  os << "# catlab.stationarity v1\n";
  os << "diameter_bin,freq_a,freq_b\n";
  std::map<long, std::pair<double, double>> merged;
  for (const auto& [bin, p] : report.histogram_a) merged[bin].first = p;
  for (const auto& [bin, p] : report.histogram_b) merged[bin].second = p;
  for (const auto& [bin, p] : merged) {
    os << bin << ',' << num(p.first) << ',' << num(p.second) << '\n';
  }
}

void write_file(const std::filesystem::path& path,
                const std::function<void(std::ostream&)>& body) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  body(out);
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace catlab
