#include "dyonlab/report.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dyonlab/error.hpp"

namespace dyonlab {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw IoError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("rename failed for " + path.string() + ": " + ec.message());
}

bool VerificationReport::all_pass() const {
  for (const auto& e : entries) {
    if (!e.pass) return false;
  }
  return true;
}

std::string report_json(const VerificationReport& report) {
  nlohmann::ordered_json j;
  j["schema"] = "dyonlab-verification-report/1";
  j["all_pass"] = report.all_pass();
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& e : report.entries) {
    nlohmann::ordered_json c;
    c["name"] = e.name;
    c["equation"] = e.equation;
    // full-precision decimal strings keep the file byte-deterministic
    c["residual"] = format_double(e.residual);
    c["tolerance"] = format_double(e.tolerance);
    c["mode"] = e.mode;
    c["pass"] = e.pass;
    j["checks"].push_back(c);
  }
  return j.dump(2) + "\n";
}

namespace {

double coulomb_alpha_of(const PotentialSpec& p) {
  switch (p.kind) {
    case PotentialSpec::Kind::Coulomb:
      return p.alpha;
    case PotentialSpec::Kind::Sum: {
      double a = 0.0;
      for (const auto& t : p.terms) a += coulomb_alpha_of(t);
      return a;
    }
    default:
      return 0.0;
  }
}

}  // namespace

std::string trajectory_csv(const SystemSpec& system, const TrajectoryRecord& trajectory) {
  const double s = system.total_monopole_number();
  const double alpha = coulomb_alpha_of(system.potential);
  std::ostringstream os;
  os << "t,x1,x2,x3,pi1,pi2,pi3,E,J1,J2,J3,A1,A2,A3,cone_residual\n";
  if (trajectory.states.empty()) return os.str();
  const Vec3 j0 = angular_momentum(trajectory.states.front(), s);
  for (std::size_t i = 0; i < trajectory.states.size(); ++i) {
    const PhaseState& st = trajectory.states[i];
    const double e = evaluate_hamiltonian(system, st);
    const Vec3 j = angular_momentum(st, s);
    const Vec3 a = runge_lenz(st, s, system.mu, alpha);
    const double cone = std::abs(dot(j0, st.x) - s * norm(st.x));
    os << format_double(trajectory.times[i]) << ',' << format_double(st.x.x) << ','
       << format_double(st.x.y) << ',' << format_double(st.x.z) << ','
       << format_double(st.pi.x) << ',' << format_double(st.pi.y) << ','
       << format_double(st.pi.z) << ',' << format_double(e) << ',' << format_double(j.x)
       << ',' << format_double(j.y) << ',' << format_double(j.z) << ',' << format_double(a.x)
       << ',' << format_double(a.y) << ',' << format_double(a.z) << ','
       << format_double(cone) << '\n';
  }
  return os.str();
}

std::string spectrum_csv(const std::vector<EigenResult>& levels, double s,
                         const std::vector<double>& analytic) {
  std::ostringstream os;
  os << "s,l,n_r,n,degeneracy,energy,energy_analytic\n";
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const auto& lv = levels[i];
    os << format_double(s) << ',' << format_double(lv.l) << ',' << lv.n_r << ','
       << format_double(lv.n_r + lv.l + 1.0) << ',' << lv.degeneracy << ','
       << format_double(lv.energy) << ','
       << (i < analytic.size() ? format_double(analytic[i]) : "") << '\n';
  }
  return os.str();
}

std::string spectrum_json(const std::vector<EigenResult>& levels, double s,
                          const std::vector<double>& analytic) {
  nlohmann::ordered_json j;
  j["s"] = format_double(s);
  j["levels"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const auto& lv = levels[i];
    nlohmann::ordered_json e;
    e["l"] = format_double(lv.l);
    e["n_r"] = lv.n_r;
    e["n"] = format_double(lv.n_r + lv.l + 1.0);
    e["degeneracy"] = lv.degeneracy;
    e["energy"] = format_double(lv.energy);
    if (i < analytic.size()) e["energy_analytic"] = format_double(analytic[i]);
    j["levels"].push_back(e);
  }
  return j.dump(2) + "\n";
}

std::string selection_rules_csv(const std::vector<Transition>& table, double s) {
  std::ostringstream os;
  os << "s,l,m,l_prime,m_prime,amp_z,amp_plus,amp_minus\n";
  for (const auto& t : table) {
    os << format_double(s) << ',' << format_double(t.l) << ',' << format_double(t.m) << ','
       << format_double(t.lp) << ',' << format_double(t.mp) << ',' << format_double(t.amp_z)
       << ',' << format_double(t.amp_plus) << ',' << format_double(t.amp_minus) << '\n';
  }
  return os.str();
}

std::string selection_rules_json(const std::vector<Transition>& table, double s) {
  nlohmann::ordered_json j;
  j["s"] = format_double(s);
  j["transitions"] = nlohmann::ordered_json::array();
  for (const auto& t : table) {
    nlohmann::ordered_json e;
    e["l"] = format_double(t.l);
    e["m"] = format_double(t.m);
    e["l_prime"] = format_double(t.lp);
    e["m_prime"] = format_double(t.mp);
    e["amp_z"] = format_double(t.amp_z);
    e["amp_plus"] = format_double(t.amp_plus);
    e["amp_minus"] = format_double(t.amp_minus);
    j["transitions"].push_back(e);
  }
  return j.dump(2) + "\n";
}

std::string poincare_csv(const std::vector<SectionPoint>& points) {
  std::ostringstream os;
  os << "t,x1,x2,x3,pi1,pi2,pi3,rho,p_rho\n";
  for (const auto& p : points) {
    const double rho = std::hypot(p.state.x.x, p.state.x.y);
    const double prho =
        rho > 0.0 ? (p.state.x.x * p.state.pi.x + p.state.x.y * p.state.pi.y) / rho : 0.0;
    os << format_double(p.t) << ',' << format_double(p.state.x.x) << ','
       << format_double(p.state.x.y) << ',' << format_double(p.state.x.z) << ','
       << format_double(p.state.pi.x) << ',' << format_double(p.state.pi.y) << ','
       << format_double(p.state.pi.z) << ',' << format_double(rho) << ','
       << format_double(prho) << '\n';
  }
  return os.str();
}

}  // namespace dyonlab
