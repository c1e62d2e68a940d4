#include "sps/snapshot.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "sps/errors.hpp"

namespace sps {

std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

namespace {

void write_header(std::ostream& os, const MetadataMap& kv) {
  for (const auto& [k, v] : kv) os << "# " << k << "=" << v << "\n";
}

MetadataMap parse_header(std::istream& is, std::string& first_data_line) {
  MetadataMap kv;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] != '#') {
      first_data_line = line;
      break;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::size_t ks = 1;
    while (ks < line.size() && line[ks] == ' ') ++ks;
    kv[line.substr(ks, eq - ks)] = line.substr(eq + 1);
  }
  return kv;
}

double meta_num(const MetadataMap& kv, const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw InvalidArgument("snapshot: missing header key " + key);
  return std::stod(it->second);
}

} // namespace

void save_snapshot(const std::filesystem::path& path, const RadialField& u,
                   const MetadataMap& extra) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  os << "# kind=radial\n";
  os << "# n=" << u.grid->n << "\n";
  os << "# rmax=" << format_g17(u.grid->r_max) << "\n";
  os << "# p=" << format_g17(u.p) << "\n";
  write_header(os, extra);
  for (int j = 0; j < u.grid->n; ++j) {
    auto i = static_cast<std::size_t>(j);
    os << format_g17(u.grid->nodes[i]) << " " << format_g17(u.values[i].real()) << " "
       << format_g17(u.values[i].imag()) << "\n";
  }
}

void save_snapshot(const std::filesystem::path& path, const BoxField& u,
                   const MetadataMap& extra) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  os << "# kind=box\n";
  os << "# n=" << u.n << "\n";
  os << "# L=" << format_g17(u.L) << "\n";
  os << "# p=" << format_g17(u.p) << "\n";
  write_header(os, extra);
  for (const auto& v : u.values)
    os << format_g17(v.real()) << " " << format_g17(v.imag()) << "\n";
}

Snapshot load_snapshot(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open " + path.string());
  std::string first;
  MetadataMap kv = parse_header(is, first);
  auto kind = kv.find("kind");
  if (kind == kv.end()) throw InvalidArgument("snapshot: missing kind header");

  Snapshot out;
  int n = static_cast<int>(meta_num(kv, "n"));
  double p = meta_num(kv, "p");

  if (kind->second == "radial") {
    double rmax = meta_num(kv, "rmax");
    auto grid = RadialGrid::make(n, rmax);
    std::vector<std::complex<double>> vals;
    vals.reserve(static_cast<std::size_t>(n));
    std::string line = first;
    do {
      if (line.empty()) continue;
      std::istringstream ls(line);
      double r, re, im;
      if (!(ls >> r >> re >> im)) throw InvalidArgument("snapshot: bad radial sample line");
      vals.emplace_back(re, im);
    } while (std::getline(is, line));
    if (static_cast<int>(vals.size()) != n)
      throw InvalidArgument("snapshot: sample count does not match n");
    out.field = make_field(std::move(grid), std::move(vals), p);
  } else if (kind->second == "box") {
    double L = meta_num(kv, "L");
    BoxField u = make_box_field(n, L, p);
    std::size_t at = 0;
    std::string line = first;
    do {
      if (line.empty()) continue;
      std::istringstream ls(line);
      double re, im;
      if (!(ls >> re >> im)) throw InvalidArgument("snapshot: bad box sample line");
      if (at >= u.values.size()) throw InvalidArgument("snapshot: too many samples");
      u.values[at++] = {re, im};
    } while (std::getline(is, line));
    if (at != u.values.size()) throw InvalidArgument("snapshot: too few samples");
    out.field = std::move(u);
  } else {
    throw InvalidArgument("snapshot: unknown kind " + kind->second);
  }
  out.metadata = std::move(kv);
  return out;
}

void save_ground_state(const std::filesystem::path& path, const GroundState& gs) {
  MetadataMap kv;
  kv["c"] = format_g17(gs.c);
  kv["alpha"] = format_g17(gs.couplings.alpha);
  kv["beta"] = format_g17(gs.couplings.beta);
  kv["lambda"] = format_g17(gs.lambda_c);
  kv["gamma"] = format_g17(gs.gamma_c);
  kv["residual"] = format_g17(gs.residual);
  kv["iterations"] = std::to_string(gs.iterations);
  kv["converged"] = gs.converged ? "1" : "0";
  save_snapshot(path, gs.field, kv);
}

GroundState load_ground_state(const std::filesystem::path& path) {
  Snapshot snap = load_snapshot(path);
  if (!snap.is_radial()) throw InvalidArgument("ground state snapshot must be radial");
  GroundState gs;
  gs.field = snap.radial();
  gs.couplings.alpha = meta_num(snap.metadata, "alpha");
  gs.couplings.beta = meta_num(snap.metadata, "beta");
  gs.couplings.p = gs.field.p;
  gs.c = meta_num(snap.metadata, "c");
  gs.lambda_c = meta_num(snap.metadata, "lambda");
  gs.gamma_c = meta_num(snap.metadata, "gamma");
  gs.residual = meta_num(snap.metadata, "residual");
  gs.iterations = static_cast<int>(meta_num(snap.metadata, "iterations"));
  gs.converged = meta_num(snap.metadata, "converged") != 0.0;
  gs.report = energy_report(gs.field, gs.couplings);
  return gs;
}

void write_csv(const std::filesystem::path& path, const GammaCurve& curve) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  os << "c,gamma,lambda,A,B,Cmag,D,residual,iterations,converged\n";
  for (std::size_t i = 0; i < curve.c_values.size(); ++i) {
    os << format_g17(curve.c_values[i]) << "," << format_g17(curve.gamma_values[i]) << ","
       << format_g17(curve.lambda_values[i]) << "," << format_g17(curve.A[i]) << ","
       << format_g17(curve.B[i]) << "," << format_g17(curve.Cmag[i]) << ","
       << format_g17(curve.D[i]) << "," << format_g17(curve.residuals[i]) << ","
       << curve.iterations[i] << "," << int(curve.converged[i]) << "\n";
  }
}

void write_csv(const std::filesystem::path& path, const TrajectoryRecord& traj) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  os << "t,mass,F,A,Q,virial,tail_fraction\n";
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    os << format_g17(traj.times[i]) << "," << format_g17(traj.mass_values[i]) << ","
       << format_g17(traj.F_values[i]) << "," << format_g17(traj.A_values[i]) << ","
       << format_g17(traj.Q_values[i]) << "," << format_g17(traj.virial_values[i]) << ","
       << format_g17(traj.tail_values[i]) << "\n";
  }
}

void write_csv(const std::filesystem::path& path, const FiberScan& scan) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  os << "t,F,Q\n";
  for (std::size_t i = 0; i < scan.t_values.size(); ++i)
    os << format_g17(scan.t_values[i]) << "," << format_g17(scan.F_values[i]) << ","
       << format_g17(scan.Q_values[i]) << "\n";
}

} // namespace sps
