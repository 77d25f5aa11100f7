#pragma once

#include <optional>
#include <string>

#include "fbns/coords.hpp"
#include "fbns/params.hpp"
#include "fbns/report.hpp"
#include "fbns/state.hpp"

namespace fbns {

enum class ProfileKind {
  PowerLaw,  ///< rho0(r) = K (a0 - r)^sigma, K fixed by unit total mass
  Uniform,   ///< rho0 = N / a0^N; transform tests only, pinch check skipped
};

enum class VelocityKind { Zero, Bump };

/// Initial-velocity shape. The bump is (1-s^2)^3 in s = (x-center)/width,
/// placed in the mass coordinate; it must vanish at x=0.
struct VelocitySpec {
  VelocityKind kind = VelocityKind::Zero;
  double amplitude = 0.0;
  double center = 0.5;
  double width = 0.2;
};

struct ProfileSpec {
  ProfileKind kind = ProfileKind::PowerLaw;
  VelocitySpec u0;
};

/// Discrete initial data on a mass grid, mass-normalized by construction.
struct InitialData {
  std::shared_ptr<const MassGrid> grid;
  Array rho0;  ///< cells
  Array u0;    ///< nodes, u0[0] == 0
  Array r0;    ///< nodes, from the exact cumulative mass map of the profile
  double a0 = 0.0;
  ProfileKind profile_kind = ProfileKind::PowerLaw;
  double amplitude = 0.0;       ///< profile amplitude (K for power law)
  double normalized_mass = 1.0; ///< discrete radial mass of the data

  LagrangianState state() const;
};

const char* to_string(ProfileKind k);

/// Builds initial data for the given profile. The density amplitude is fixed
/// analytically so the radial mass integral equals 1; node radii come from
/// the exact cumulative mass map. Throws on inadmissible requests (e.g. a
/// velocity profile with u0(0) != 0).
InitialData make_initial_data(const Params& p, const ProfileSpec& profile,
                              Index num_cells);

/// Pinch constants transported to the mass coordinate: a bound
/// c (a0-r)^sigma on the density maps to roughly c' (1-x)^beta with
/// c' = c^{1/(1+sigma)} ((1+sigma)/a0^{N-1})^beta near the interface.
double lagrangian_pinch_constant(double c, const Params& p);

/// Checks mass normalization, the pinch bounds in both radial and mass-
/// coordinate form, the boundary condition u0(0)=0, and finiteness of the
/// weighted data integrals. Failures are reported, never thrown.
VerificationReport validate_initial_data(const InitialData& d,
                                         const Params& p);

}  // namespace fbns
