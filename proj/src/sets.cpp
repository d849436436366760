#include "isocone/sets.hpp"

#include <algorithm>
#include <cmath>

namespace isocone {

namespace {
template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;
}  // namespace

std::string_view set_kind(const ConvexSet& s) {
  return std::visit(overloaded{[](const Hyperplane&) { return std::string_view("hyperplane"); },
                               [](const Halfspace&) { return std::string_view("halfspace"); },
                               [](const Polyhedron&) { return std::string_view("polyhedron"); }},
                    s);
}

Eigen::Index set_dim(const ConvexSet& s) {
  return std::visit([](const auto& v) { return v.dim(); }, s);
}

double set_violation(const ConvexSet& s, const Vector& z) {
  return std::visit(overloaded{[&](const Hyperplane& h) { return std::abs(h.signed_distance(z)); },
                               [&](const Halfspace& h) { return std::max(0.0, h.signed_distance(z)); },
                               [&](const Polyhedron& p) { return std::max(0.0, p.signed_distance(z)); }},
                    s);
}

Vector project_set(const ConvexSet& s, const Vector& x) {
  return std::visit(overloaded{[&](const Hyperplane& h) { return project_hyperplane(h, x); },
                               [&](const Halfspace& h) { return project_halfspace(h, x); },
                               [&](const Polyhedron& p) { return project_polyhedron(p, x); }},
                    s);
}

double set_scale(const ConvexSet& s) {
  return std::visit(
      overloaded{[](const Hyperplane& h) { return std::max(1.0, h.anchor().norm()); },
                 [](const Halfspace& h) { return std::max(1.0, h.anchor().norm()); },
                 [](const Polyhedron& p) {
                   double r = 1.0;
                   for (Eigen::Index i = 0; i < p.normals().rows(); ++i) {
                     r = std::max(r, std::abs(p.offsets()[i]) / p.normals().row(i).norm());
                   }
                   if (p.interior_point()) r = std::max(r, p.interior_point()->norm());
                   return r;
                 }},
      s);
}

}  // namespace isocone
