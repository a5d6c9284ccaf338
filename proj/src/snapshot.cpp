// snapshot.cpp

#include "relaxhydro/snapshot.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace relaxhydro {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string header_line(const ScalarField& field, double t) {
  std::ostringstream out;
  out << "# grid dim=" << field.grid.dim << " n=" << field.grid.n
      << " L=" << fmt(field.grid.half_width) << " t=" << fmt(t) << "\n";
  return out.str();
}

struct Header {
  int dim = 0;
  int n = 0;
  double half_width = 0.0;
  double t = 0.0;
};

Header parse_header(const std::string& line) {
  Header h;
  if (std::sscanf(line.c_str(), "# grid dim=%d n=%d L=%lf t=%lf", &h.dim, &h.n,
                  &h.half_width, &h.t) != 4)
    throw std::runtime_error("snapshot header malformed: " + line);
  return h;
}

void write_le_doubles(std::ofstream& out, const std::vector<double>& values) {
  static_assert(sizeof(double) == 8);
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(values.data()),
              static_cast<std::streamsize>(values.size() * 8));
  } else {
    for (double v : values) {
      std::uint64_t bits;
      std::memcpy(&bits, &v, 8);
      char b[8];
      for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
      out.write(b, 8);
    }
  }
}

}  // namespace

void write_snapshot_csv(const std::string& path, const ScalarField& field,
                        double t) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << header_line(field, t);
  for (double v : field.values) out << fmt(v) << "\n";
}

void write_snapshot_binary(const std::string& path, const ScalarField& field,
                           double t) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << header_line(field, t);
  write_le_doubles(out, field.values);
}

Snapshot read_snapshot_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty snapshot: " + path);
  const Header h = parse_header(line);
  Snapshot snap;
  snap.t = h.t;
  snap.field = ScalarField(PeriodicGrid::make(h.dim, h.n, h.half_width));
  for (double& v : snap.field.values) {
    if (!std::getline(in, line))
      throw std::runtime_error("snapshot truncated: " + path);
    v = std::stod(line);
  }
  return snap;
}

Snapshot read_snapshot_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty snapshot: " + path);
  const Header h = parse_header(line);
  Snapshot snap;
  snap.t = h.t;
  snap.field = ScalarField(PeriodicGrid::make(h.dim, h.n, h.half_width));
  in.read(reinterpret_cast<char*>(snap.field.values.data()),
          static_cast<std::streamsize>(snap.field.values.size() * 8));
  if (static_cast<std::size_t>(in.gcount()) != snap.field.values.size() * 8)
    throw std::runtime_error("snapshot truncated: " + path);
  if constexpr (std::endian::native != std::endian::little) {
    for (double& v : snap.field.values) {
      std::uint64_t bits;
      std::memcpy(&bits, &v, 8);
      std::uint64_t sw = 0;
      for (int i = 0; i < 8; ++i) sw |= ((bits >> (8 * i)) & 0xff) << (8 * (7 - i));
      std::memcpy(&v, &sw, 8);
    }
  }
  return snap;
}

void write_diagnostics_csv(const std::string& path,
                           const std::vector<DiagnosticsRecord>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "step,t,dt,mass,kinetic,internal,interaction,confinement,E_total,"
         "dissipation_residual\n";
  for (const auto& r : rows)
    out << r.step << "," << fmt(r.t) << "," << fmt(r.dt) << "," << fmt(r.mass)
        << "," << fmt(r.kinetic) << "," << fmt(r.internal) << ","
        << fmt(r.interaction) << "," << fmt(r.confinement) << ","
        << fmt(r.e_total) << "," << fmt(r.dissipation_residual) << "\n";
}

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "epsilon,sup_theta,theta0,fitted_order_running,l2_density_gap_max,"
         "velocity_gap_l2l2\n";
  for (const auto& r : rows)
    out << fmt(r.epsilon) << "," << fmt(r.sup_theta) << "," << fmt(r.theta0)
        << "," << fmt(r.fitted_order_running) << "," << fmt(r.l2_density_gap_max)
        << "," << fmt(r.velocity_gap_l2l2) << "\n";
}

std::uint64_t fnv1a_checksum(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::uint64_t hash = 0xcbf29ce484222325ull;
  char buf[1 << 14];
  while (in) {
    in.read(buf, sizeof buf);
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      hash ^= static_cast<unsigned char>(buf[i]);
      hash *= 0x100000001b3ull;
    }
  }
  return hash;
}

void ReportBuilder::add_artifact(const std::string& path) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a_checksum(path)));
  lines_.push_back(std::string("artifact ") + buf + "  " + path);
}

void ReportBuilder::add_check(const std::string& name, bool pass,
                              const std::string& detail) {
  lines_.push_back(std::string(pass ? "PASS " : "FAIL ") + name +
                   (detail.empty() ? "" : "  (" + detail + ")"));
  if (!pass) all_passed_ = false;
}

void ReportBuilder::add_note(const std::string& text) { lines_.push_back(text); }

std::string ReportBuilder::str() const {
  std::string out;
  for (const auto& l : lines_) {
    out += l;
    out += "\n";
  }
  return out;
}

void ReportBuilder::write(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << str();
}

}  // namespace relaxhydro
