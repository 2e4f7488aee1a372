#pragma once

#include <string>

#include "cascade/boundary_control.hpp"
#include "cascade/internal_control.hpp"
#include "cascade/types.hpp"

namespace cascade {

std::string render_matrix(const Matrix& a, const std::string& indent = "  ");

std::string render_certification(const CertificationReport& report);

/// Structured-text export of a synthesized controller, certification
/// verdicts included.
std::string render_internal_controller(const PlantSpec& spec,
                                       const InternalController& ctrl,
                                       const CertificationReport& report);

std::string render_boundary_controller(const PlantSpec& spec,
                                       const BoundaryController& ctrl,
                                       const CertificationReport& report);

}  // namespace cascade
