// The adaptive integrator is header-only (templates over the integrand); this
// translation unit pins the header into the library build so interface
// regressions surface here rather than in downstream targets.
#include "subfbm/quadrature.hpp"

namespace subfbm {
namespace {
// Force instantiation of both entry points with a plain function pointer.
[[maybe_unused]] double instantiation_anchor(double (*f)(double)) {
  QuadratureConfig cfg;
  return integrate_adaptive(f, 0.0, 1.0, cfg).value +
         integrate_left_power(f, 1.0, 0.5, cfg).value;
}
}  // namespace
}  // namespace subfbm
