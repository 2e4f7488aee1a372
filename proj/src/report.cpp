#include "cascade/report.hpp"

#include <sstream>

#include "cascade/csv.hpp"

namespace cascade {

std::string render_matrix(const Matrix& a, const std::string& indent) {
  std::ostringstream out;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    out << indent;
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out << (j ? " " : "") << format_double(a(i, j));
    }
    out << "\n";
  }
  return out.str();
}

std::string render_certification(const CertificationReport& report) {
  std::ostringstream out;
  out << "certification: " << (report.all_passed() ? "PASS" : "FAIL") << "\n";
  for (const auto& check : report.checks) {
    out << "  [" << (check.passed ? "ok" : "FAIL") << "] " << check.name
        << ": value " << format_double(check.value) << " vs bound "
        << format_double(check.bound);
    if (!check.detail.empty()) out << "  (" << check.detail << ")";
    out << "\n";
  }
  return out.str();
}

namespace {

void render_plant(std::ostringstream& out, const PlantSpec& spec) {
  out << "plant: m = " << spec.m << ", length = " << format_double(spec.length)
      << ", boundary " << to_string(spec.bc_kind()) << ", actuation "
      << to_string(spec.mode) << "\n";
  out << "diffusion:";
  for (int i = 0; i < spec.m; ++i) out << " " << format_double(spec.diffusion[i]);
  out << "\nreaction:\n" << render_matrix(spec.reaction);
}

}  // namespace

std::string render_internal_controller(const PlantSpec& spec,
                                       const InternalController& ctrl,
                                       const CertificationReport& report) {
  std::ostringstream out;
  out << "# in-domain controller\n";
  render_plant(out, spec);
  out << "delta: " << format_double(ctrl.delta) << "\n";
  out << "n_modes: " << ctrl.n_modes << "\n";
  out << "k_q:\n" << render_matrix(ctrl.k_q);
  out << "p:\n" << render_matrix(ctrl.p);
  out << "transform: sigma = " << ctrl.family.sigma
      << ", degree = " << ctrl.family.sigma_bar << "\n";
  for (std::size_t i = 0; i < ctrl.family.tbars.size(); ++i) {
    out << "tbar_" << i + 1 << ":\n" << render_matrix(ctrl.family.tbars[i]);
  }
  for (std::size_t n = 0; n < ctrl.kbar.size(); ++n) {
    out << "kbar_" << n + 1 << ":\n" << render_matrix(ctrl.kbar[n]);
  }
  out << "k:\n" << render_matrix(ctrl.k);
  out << render_certification(report);
  return out.str();
}

std::string render_boundary_controller(const PlantSpec& spec,
                                       const BoundaryController& ctrl,
                                       const CertificationReport& report) {
  std::ostringstream out;
  out << "# boundary dynamic controller\n";
  render_plant(out, spec);
  out << "delta0: " << format_double(ctrl.delta0) << "\n";
  out << "k_q: " << format_double(ctrl.k_q) << "\n";
  out << "n_modes: " << ctrl.n_modes << "\n";
  out << "mu0: " << ctrl.mu0 << "\n";
  out << "mu:";
  for (int j = 0; j < ctrl.n_modes; ++j) out << " " << format_double(ctrl.mus[j]);
  out << "\npsi:\n" << render_matrix(ctrl.psi);
  out << "psi_inverse (" << (ctrl.psi_inv_by_lu ? "lu fallback" : "closed form")
      << "):\n"
      << render_matrix(ctrl.psi_inv);
  out << "h:\n" << render_matrix(ctrl.h);
  out << "theta:\n" << render_matrix(ctrl.theta);
  out << "k:\n" << render_matrix(ctrl.k);
  out << render_certification(report);
  return out.str();
}

}  // namespace cascade
