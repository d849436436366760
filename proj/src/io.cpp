#include "isocone/io.hpp"

#include <cmath>
#include <fstream>

#include "isocone/errors.hpp"

namespace isocone {

namespace {

const Json& field(const Json& j, const char* name) {
  if (!j.is_object()) throw ParseError(std::string("expected an object with field '") + name + "'");
  auto it = j.find(name);
  if (it == j.end()) throw ParseError(std::string("missing field '") + name + "'");
  return *it;
}

std::string type_of(const Json& j) {
  const Json& t = field(j, "type");
  if (!t.is_string()) throw ParseError("field 'type' must be a string");
  return t.get<std::string>();
}

Halfspace parse_halfspace_fields(const Json& j) {
  const Vector n = parse_vector(field(j, "normal"));
  if (j.contains("anchor")) return Halfspace(n, parse_vector(j["anchor"]));
  if (j.contains("offset")) {
    if (!j["offset"].is_number()) throw ParseError("field 'offset' must be a number");
    return Halfspace::from_offset(n, j["offset"].get<double>());
  }
  throw ParseError("a halfspace needs 'anchor' or 'offset'");
}

Json halfspace_fields(const Vector& normal, const Vector& anchor) {
  Json j;
  j["normal"] = to_json(normal);
  j["anchor"] = to_json(anchor);
  return j;
}

}  // namespace

Vector parse_vector(const Json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("expected a non-empty array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ParseError("expected a non-empty array of numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

Json to_json(const Vector& v) {
  Json j = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v[i]);
  return j;
}

Matrix parse_columns(const Json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("expected a non-empty array of column arrays");
  const Vector first = parse_vector(j[0]);
  Matrix m(first.size(), static_cast<Eigen::Index>(j.size()));
  for (std::size_t c = 0; c < j.size(); ++c) {
    const Vector col = parse_vector(j[c]);
    if (col.size() != first.size()) throw ParseError("columns have different lengths");
    m.col(static_cast<Eigen::Index>(c)) = col;
  }
  return m;
}

Json columns_to_json(const Matrix& m) {
  Json j = Json::array();
  for (Eigen::Index c = 0; c < m.cols(); ++c) j.push_back(to_json(Vector(m.col(c))));
  return j;
}

Cone parse_cone(const Json& j) {
  const std::string type = type_of(j);
  auto dim = [&] {
    const Json& d = field(j, "dim");
    if (!d.is_number_integer()) throw ParseError("field 'dim' must be an integer");
    return d.get<int>();
  };
  if (type == "orthant") return Cone::orthant(dim());
  if (type == "lorentz") return Cone::lorentz(dim());
  if (type == "simplicial") return Cone::simplicial(parse_columns(field(j, "generators")));
  if (type == "generators") return Cone::generators(parse_columns(field(j, "generators")));
  if (type == "facets") return Cone::facets(parse_columns(field(j, "normals")));
  throw ParseError("unknown cone type '" + type + "'");
}

Json to_json(const Cone& k) {
  Json j;
  j["type"] = std::string(to_string(k.kind()));
  switch (k.kind()) {
    case ConeKind::Orthant:
    case ConeKind::Lorentz: j["dim"] = k.dim(); break;
    case ConeKind::Simplicial:
    case ConeKind::Generators: j["generators"] = columns_to_json(k.generators()); break;
    case ConeKind::Facets: j["normals"] = columns_to_json(k.normals()); break;
  }
  return j;
}

ConvexSet parse_set(const Json& j) {
  const std::string type = type_of(j);
  if (type == "hyperplane") return Hyperplane(parse_vector(field(j, "normal")), parse_vector(field(j, "anchor")));
  if (type == "halfspace") return parse_halfspace_fields(j);
  if (type == "polyhedron") {
    const Json& list = field(j, "halfspaces");
    if (!list.is_array() || list.empty()) throw ParseError("field 'halfspaces' must be a non-empty array");
    std::vector<Halfspace> hs;
    for (const Json& h : list) hs.push_back(parse_halfspace_fields(h));
    std::optional<Vector> interior;
    if (j.contains("interior_point")) interior = parse_vector(j["interior_point"]);
    return Polyhedron(std::move(hs), interior);
  }
  throw ParseError("unknown set type '" + type + "'");
}

Json to_json(const ConvexSet& s) {
  Json j;
  j["type"] = std::string(set_kind(s));
  if (const auto* h = std::get_if<Hyperplane>(&s)) {
    j["normal"] = to_json(h->normal());
    j["anchor"] = to_json(h->anchor());
  } else if (const auto* h = std::get_if<Halfspace>(&s)) {
    j["normal"] = to_json(h->normal());
    j["anchor"] = to_json(h->anchor());
  } else {
    const auto& p = std::get<Polyhedron>(s);
    Json list = Json::array();
    for (const Halfspace& h : p.halfspaces()) list.push_back(halfspace_fields(h.normal(), h.anchor()));
    j["halfspaces"] = list;
    if (p.interior_point()) j["interior_point"] = to_json(*p.interior_point());
  }
  return j;
}

Json to_json(const Counterexample& c) {
  Json j;
  j["relation"] = c.relation;
  j["source"] = c.source;
  j["sample_index"] = c.sample_index;
  j["x"] = to_json(c.x);
  j["y"] = to_json(c.y);
  Json d;
  for (const auto& [name, v] : c.derived) d[name] = to_json(v);
  j["derived"] = d;
  j["residual"] = c.residual;
  return j;
}

Json to_json(const CheckReport& r) {
  Json j;
  j["check"] = r.check;
  j["verdict"] = std::string(to_string(r.verdict));
  j["method"] = r.method;
  j["samples_used"] = r.samples_used;
  j["max_residual"] = r.max_residual;
  j["threshold"] = r.threshold;
  j["consistent"] = r.consistent;
  j["clauses"] = r.clauses;
  j["counterexample"] = r.counterexample ? to_json(*r.counterexample) : Json(nullptr);
  if (!r.facets.empty()) {
    Json fs = Json::array();
    for (const FacetVerdict& f : r.facets) {
      Json fj;
      fj["index"] = f.index + 1;
      fj["normal"] = to_json(f.normal);
      fj["defining"] = f.defining;
      fj["duplicate"] = f.duplicate;
      fj["verdict"] = std::string(to_string(f.verdict));
      fj["margin"] = f.margin ? Json(*f.margin) : Json(nullptr);
      fj["method"] = f.method;
      fs.push_back(fj);
    }
    j["facets"] = fs;
  }
  if (!r.subchecks.empty()) {
    Json subs = Json::array();
    for (const CheckReport& s : r.subchecks) subs.push_back(to_json(s));
    j["subchecks"] = subs;
  }
  j["notes"] = r.notes;
  return j;
}

Json to_json(const NormalClass& c) {
  Json j;
  j["case"] = std::string(to_string(c.kind));
  if (c.kind != NormalCase::NotInvariant) j["p"] = c.p + 1;
  if (c.kind == NormalCase::PairCone) j["q"] = c.q + 1;
  if (c.kind == NormalCase::GeneratorRay || c.kind == NormalCase::DualRay) j["sign"] = c.sign;
  j["matches"] = c.matches;
  j["also"] = c.also;
  j["residual"] = c.residual;
  return j;
}

Json to_json(const NormalFamily& f) {
  Json j;
  j["case"] = std::string(to_string(f.kind));
  j["p"] = f.p + 1;
  if (f.kind == NormalCase::PairCone) {
    j["q"] = f.q + 1;
  } else {
    j["sign"] = f.sign;
  }
  j["shape"] = std::string(to_string(f.shape));
  Json edges = Json::array();
  for (const Vector& e : f.edges) edges.push_back(to_json(e));
  j["edges"] = edges;
  j["representative"] = f.shape == FamilyShape::Empty ? Json(nullptr) : to_json(f.representative);
  return j;
}

Json to_json(const PropertyReport& r) {
  Json witness;
  witness["x"] = to_json(r.witness.x);
  witness["y"] = to_json(r.witness.y);
  witness["z"] = to_json(r.witness.z);
  witness["w"] = to_json(r.witness.w);
  witness["lambda"] = r.witness.lambda;
  witness["t"] = r.witness.t;
  Json items = Json::array();
  for (const PropertyItem& i : r.items) {
    Json ij;
    ij["item"] = i.item;
    ij["pass"] = i.pass;
    ij["residual"] = i.residual;
    ij["witness"] = witness;
    items.push_back(ij);
  }
  return items;
}

Json to_json(const MoreauPair& m, const Vector& x) {
  Json j;
  j["p"] = to_json(m.p);
  j["q"] = to_json(m.q);
  Json res;
  res["reconstruction"] = m.reconstruction_residual(x);
  res["orthogonality"] = m.orthogonality_residual();
  j["residuals"] = res;
  return j;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("'" + path + "': " + e.what());
  }
}

}  // namespace isocone
