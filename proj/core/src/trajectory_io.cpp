#include <cstdio>
#include <algorithm>

#include "erds/csv.hpp"
#include "erds/dynamics.hpp"
#include "erds/snapshot_io.hpp"

namespace erds {

namespace fs = std::filesystem;

namespace {

std::string frame_name(std::size_t k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame_%06zu.erds", k);
  return buf;
}

}  // namespace

void write_trajectory(const fs::path& dir, const Trajectory& traj) {
  fs::create_directories(dir);
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.path().filename().string().rfind("frame_", 0) == 0) fs::remove(entry.path());
  for (std::size_t k = 0; k < traj.states().size(); ++k) write_frame_file(dir / frame_name(k), traj.states()[k]);

  CsvTable csv;
  const std::size_t p = traj.species_count();
  csv.columns.push_back("time");
  for (std::size_t i = 0; i < p; ++i) csv.columns.push_back("mass_" + std::to_string(i + 1));
  for (const char* c : {"entropy", "dissipation", "min_value", "dt"}) csv.columns.emplace_back(c);
  csv.units = "nondimensional; time and dt in time units, mass_i = int a_i dx, entropy = sum int a ln a dx, "
              "dissipation = sum int |grad sqrt a|^2 dx";
  for (const auto& r : traj.step_log()) {
    std::vector<double> row{r.time};
    for (double m : r.mass) row.push_back(m);
    row.insert(row.end(), {r.entropy, r.dissipation, r.min_value, r.dt});
    csv.add_row(std::move(row));
  }
  csv.write(dir / "diagnostics.csv");
}

Trajectory read_trajectory(const fs::path& dir) {
  std::vector<fs::path> frames;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (name.rfind("frame_", 0) == 0 && entry.path().extension() == ".erds") frames.push_back(entry.path());
  }
  if (frames.empty()) throw Error("no frame files in " + dir.string());
  std::sort(frames.begin(), frames.end());
  Trajectory traj;
  for (const auto& f : frames) traj.push(read_frame_file(f));

  if (fs::exists(dir / "diagnostics.csv")) {
    const CsvTable csv = read_csv(dir / "diagnostics.csv");
    const std::size_t p = traj.species_count();
    if (csv.columns.size() != p + 5) throw Error("diagnostics.csv column count does not match species count");
    for (const auto& row : csv.rows) {
      StepRecord r;
      r.time = row[0];
      r.mass.assign(row.begin() + 1, row.begin() + 1 + static_cast<long>(p));
      r.entropy = row[p + 1];
      r.dissipation = row[p + 2];
      r.min_value = row[p + 3];
      r.dt = row[p + 4];
      traj.log_step(std::move(r));
    }
  }
  return traj;
}

}  // namespace erds
