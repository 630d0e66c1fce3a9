#include "jtl/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>

#include <nlohmann/json.hpp>

#include "jtl/experiments.hpp"

namespace jtl {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

// Row writer that reuses one buffer.
class CsvRow {
 public:
  explicit CsvRow(std::ostream& out) : out_(out) {}
  void add(double v) {
    sep();
    line_ += format_shortest(v);
  }
  void add(long v) {
    sep();
    line_ += std::to_string(v);
  }
  void end() {
    line_ += '\n';
    out_ << line_;
    line_.clear();
  }

 private:
  void sep() {
    if (!line_.empty()) line_ += ',';
  }
  std::ostream& out_;
  std::string line_;
};

}  // namespace

std::string format_sig(double value, int digits) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, digits);
  return std::string(buf, res.ptr);
}

std::string format_shortest(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj) {
  std::ofstream out = open_out(path);
  const int n = traj.cells();
  std::string header = "t";
  for (int i = 1; i <= n; ++i) header += ",phi_" + std::to_string(i);
  for (int i = 1; i <= n; ++i) header += ",v_" + std::to_string(i);
  header += ",V_src,I_in,I_out\n";
  out << header;
  CsvRow row(out);
  for (Eigen::Index j = 0; j < traj.samples(); ++j) {
    row.add(traj.times[j]);
    for (int i = 0; i < n; ++i) row.add(traj.phi(i, j));
    for (int i = 0; i < n; ++i) row.add(traj.v(i, j));
    row.add(traj.v_src[j]);
    row.add(traj.i_in[j]);
    row.add(traj.i_out[j]);
    row.end();
  }
  finish(out, path);
}

void write_field_csv(const std::filesystem::path& path, const Trajectory& traj) {
  std::ofstream out = open_out(path);
  out << "t,cell,phi,v,u_cell\n";
  CsvRow row(out);
  for (Eigen::Index j = 0; j < traj.samples(); ++j) {
    for (int i = 0; i < traj.cells(); ++i) {
      row.add(traj.times[j]);
      row.add(static_cast<long>(i + 1));
      row.add(traj.phi(i, j));
      row.add(traj.v(i, j));
      row.add(traj.u_cell(i, j));
      row.end();
    }
  }
  finish(out, path);
}

void write_spectrum_csv(const std::filesystem::path& path, const SpectrumResult& spectrum) {
  std::ofstream out = open_out(path);
  out << "freq,psd\n";
  CsvRow row(out);
  for (Eigen::Index k = 0; k < spectrum.freqs.size(); ++k) {
    row.add(spectrum.freqs[k]);
    row.add(spectrum.psd[k]);
    row.end();
  }
  finish(out, path);
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
  std::ofstream out = open_out(path);
  out << doc.dump(2) << '\n';
  finish(out, path);
}

std::vector<std::filesystem::path> write_report(const std::filesystem::path& dir,
                                                const ScenarioReport& report) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
  const std::string id = to_string(report.id);
  std::vector<std::filesystem::path> written;
  for (size_t k = 0; k < report.runs.size(); ++k) {
    const RunRecord& run = report.runs[k];
    const std::string stem = id + "_" + std::to_string(k);
    written.push_back(dir / (stem + "_spectrum.csv"));
    write_spectrum_csv(written.back(), run.spectrum);
    if (run.trajectory) {
      written.push_back(dir / (stem + "_trajectory.csv"));
      write_trajectory_csv(written.back(), *run.trajectory);
      written.push_back(dir / (stem + "_field.csv"));
      write_field_csv(written.back(), *run.trajectory);
    }
  }
  written.push_back(dir / (id + "_summary.json"));
  write_json(written.back(), to_json(report));
  return written;
}

}  // namespace jtl
