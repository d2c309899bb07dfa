#include "seglab/synthetic.hpp"

#include <cmath>

#include "seglab/quadrature.hpp"

namespace seglab {
namespace {

Pt unit(const Pt& v, int dim) {
  const double len =
      dim == 2 ? std::sqrt(v.x * v.x + v.y * v.y) : std::fabs(v.x);
  require(len > 0.0, ErrorKind::InvalidGrid, "direction must be nonzero");
  return dim == 2 ? Pt{v.x / len, v.y / len} : Pt{v.x / len, 0.0};
}

}  // namespace

Pt snap_to_node(const Grid& g, const Pt& center) {
  Pt out{0.0, 0.0};
  for (int axis = 0; axis < g.dim(); ++axis) {
    const double c = axis == 0 ? center.x : center.y;
    int k = static_cast<int>(std::lround((c - g.low(axis)) / g.h(axis)));
    k = std::max(0, std::min(g.n(axis) + 1, k));
    (axis == 0 ? out.x : out.y) = g.coord(axis, k);
  }
  return out;
}

FieldSet synth_linear(const Grid& g, double slope, const Pt& e,
                      const Pt& center) {
  const Pt dir = unit(e, g.dim());
  const Pt c = snap_to_node(g, center);
  FieldSet f(g, 1);
  fill_component(f, 1, [&](const Pt& p) {
    return slope * ((p.x - c.x) * dir.x + (p.y - c.y) * dir.y);
  });
  return f;
}

FieldSet synth_kink_pair(const Grid& g, const Pt& nu, double s_plus,
                         double s_minus, const Pt& center) {
  const Pt dir = unit(nu, g.dim());
  const Pt c = snap_to_node(g, center);
  FieldSet f(g, 2);
  fill_component(f, 1, [&](const Pt& p) {
    const double t = (p.x - c.x) * dir.x + (p.y - c.y) * dir.y;
    return t > 0.0 ? s_plus * t : 0.0;
  });
  fill_component(f, 2, [&](const Pt& p) {
    const double t = (p.x - c.x) * dir.x + (p.y - c.y) * dir.y;
    return t < 0.0 ? -s_minus * t : 0.0;
  });
  return f;
}

FieldSet synth_triple_junction(const Grid& g, const Pt& center) {
  require(g.dim() == 2, ErrorKind::DimensionMismatch,
          "triple junction field is two-dimensional");
  const Pt c = snap_to_node(g, center);
  FieldSet f(g, 3);
  for (int k = 0; k < 3; ++k) {
    const double a = 2.0 * kPi * k / 3.0;
    fill_component(f, k + 1, [&](const Pt& p) {
      const double dx = p.x - c.x;
      const double dy = p.y - c.y;
      const double r = std::sqrt(dx * dx + dy * dy);
      if (r == 0.0) return 0.0;
      double th = std::atan2(dy, dx) - a;
      while (th < 0.0) th += 2.0 * kPi;
      while (th >= 2.0 * kPi) th -= 2.0 * kPi;
      if (th > 2.0 * kPi / 3.0) return 0.0;
      return std::pow(r, 1.5) * std::sin(1.5 * th);
    });
  }
  return f;
}

FieldSet synth_four_sector(const Grid& g, const Pt& center) {
  require(g.dim() == 2, ErrorKind::DimensionMismatch,
          "four sector field is two-dimensional");
  const Pt c = snap_to_node(g, center);
  FieldSet f(g, 2);
  fill_component(f, 1, [&](const Pt& p) {
    const double v = (p.x - c.x) * (p.y - c.y);
    return v > 0.0 ? v : 0.0;
  });
  fill_component(f, 2, [&](const Pt& p) {
    const double v = (p.x - c.x) * (p.y - c.y);
    return v < 0.0 ? -v : 0.0;
  });
  return f;
}

}  // namespace seglab
