#include "vem2d/polybasis.hpp"

#include "vem2d/errors.hpp"

namespace vem2d {

BasisEval eval_basis(const ScaledFrame& frame, const Vec2& point) {
    if (!(frame.diameter > 0.0)) {
        throw ValidationError("scaled frame requires a positive diameter");
    }
    const double xi = (point.x() - frame.centroid.x()) / frame.diameter;
    const double eta = (point.y() - frame.centroid.y()) / frame.diameter;
    BasisEval p;
    p << 1.0, 0.0, -eta, eta, xi, 0.0,
         0.0, 1.0,  xi,  xi, 0.0, eta;
    return p;
}

BasisStrains basis_strains(const ScaledFrame& frame) {
    if (!(frame.diameter > 0.0)) {
        throw ValidationError("scaled frame requires a positive diameter");
    }
    const double inv_h = 1.0 / frame.diameter;
    BasisStrains s = BasisStrains::Zero();
    s(2, 3) = 2.0 * inv_h;
    s(0, 4) = inv_h;
    s(1, 5) = inv_h;
    return s;
}

} // namespace vem2d
