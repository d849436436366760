#include "isocone/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "isocone/errors.hpp"
#include "isocone/io.hpp"

namespace isocone {

namespace {

struct Settings {
  std::uint64_t seed = 0;
  std::size_t samples = 1000;
  std::optional<double> eps_abs;
  std::optional<double> eps_rel;
  std::string out_path;
};

Tolerance tolerance_of(const Settings& s) {
  Tolerance t;
  if (s.eps_abs) {
    if (!(*s.eps_abs > 0.0)) throw InvalidArgument("--eps-abs must be positive");
    t.abs = *s.eps_abs;
  }
  if (s.eps_rel) {
    if (!(*s.eps_rel > 0.0)) throw InvalidArgument("--eps-rel must be positive");
    t.rel = *s.eps_rel;
  }
  return t;
}

Json envelope(const std::string& command, const Settings& s, const Tolerance& tol) {
  Json j;
  j["isocone_version"] = ISOCONE_VERSION;
  j["command"] = command;
  j["seed"] = s.seed;
  j["samples"] = s.samples;
  j["tolerance"] = {{"abs", tol.abs}, {"rel", tol.rel}};
  return j;
}

// A normal is given either as a bare array or as an object with "normal".
Vector parse_normal(const Json& j) {
  if (j.is_array()) return parse_vector(j);
  if (j.is_object() && j.contains("normal")) return parse_vector(j["normal"]);
  throw ParseError("expected a normal vector (array) or an object with 'normal'");
}

int exit_for(const CheckReport& r) {
  if (!r.consistent) return kExitNumeric;
  if (is_refutation(r.verdict)) return kExitRefuted;
  if (r.verdict == Verdict::Inconclusive) return kExitInconclusive;
  return kExitPass;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Projections onto convex cones, lattice-like operations and invariance checks", "isocone"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ISOCONE_VERSION));
  Settings settings;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", settings.seed, "random seed")->capture_default_str();
    sub->add_option("--samples", settings.samples, "number of sampled pairs")->capture_default_str();
    sub->add_option("--eps-abs", settings.eps_abs, "absolute tolerance");
    sub->add_option("--eps-rel", settings.eps_rel, "relative tolerance");
    sub->add_option("--out", settings.out_path, "write the report to this file instead of stdout");
  };

  std::string cone_file, vector_file, op_name, x_file, y_file, kind;
  std::vector<std::string> files;

  CLI::App* project = app.add_subcommand("project", "project a vector onto a cone, with its Moreau pair");
  project->add_option("cone", cone_file, "cone JSON")->required();
  project->add_option("vector", vector_file, "vector JSON")->required();
  add_common(project);

  CLI::App* latop = app.add_subcommand("latop", "evaluate meet, join, meet-star or join-star");
  latop->add_option("op", op_name, "meet | join | meet-star | join-star")
      ->required()
      ->check(CLI::IsMember({"meet", "join", "meet-star", "join-star"}));
  latop->add_option("cone", cone_file, "cone JSON")->required();
  latop->add_option("x", x_file, "x JSON")->required();
  latop->add_option("y", y_file, "y JSON")->required();
  add_common(latop);

  CLI::App* check = app.add_subcommand("check", "run an invariance, isotonicity or classification check");
  check
      ->add_option("kind", kind,
                   "invariant | isotone | sublattice | lorentz-product | classify-normal | enumerate-normals | "
                   "tangent-facets")
      ->required()
      ->check(CLI::IsMember({"invariant", "isotone", "sublattice", "lorentz-product", "classify-normal",
                             "enumerate-normals", "tangent-facets"}));
  check->add_option("files", files, "set / normal file, then cone file (lorentz-product: set only)")
      ->required();
  add_common(check);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForVersion&) {
    out << ISOCONE_VERSION << "\n";
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "isocone: " << e.what() << "\n";
    return kExitInvalid;
  }

  auto emit = [&](const Json& report) {
    const std::string text = report.dump(2) + "\n";
    if (settings.out_path.empty()) {
      out << text;
    } else {
      std::ofstream f(settings.out_path, std::ios::binary);
      if (!f) throw ParseError("cannot write '" + settings.out_path + "'");
      f << text;
    }
  };

  try {
    const Tolerance tol = tolerance_of(settings);

    if (project->parsed()) {
      const Cone k = parse_cone(read_json_file(cone_file));
      const Vector x = parse_vector(read_json_file(vector_file));
      if (x.size() != k.dim()) throw DimensionError("vector and cone dimensions differ");
      Json j = envelope("project", settings, tol);
      j["cone"] = to_json(k);
      j["x"] = to_json(x);
      const MoreauPair mp = moreau_decompose(k, x);
      j["projection"] = to_json(project_cone(k, x));
      j["moreau"] = to_json(mp, x);
      emit(j);
      return kExitPass;
    }

    if (latop->parsed()) {
      const Cone k = parse_cone(read_json_file(cone_file));
      const Vector x = parse_vector(read_json_file(x_file));
      const Vector y = parse_vector(read_json_file(y_file));
      const LatOp op = *parse_latop(op_name);
      const LatticeLikeOps ops(k);
      const LatOpResult r = ops.evaluate(op, x, y);
      Json j = envelope("latop", settings, tol);
      j["op"] = op_name;
      j["cone"] = to_json(k);
      j["x"] = to_json(x);
      j["y"] = to_json(y);
      j["value"] = to_json(r.value);
      j["identity_path"] = to_json(r.identity);
      j["path_gap"] = r.path_gap;
      j["paths_agree"] = r.paths_agree;
      emit(j);
      return r.paths_agree ? kExitPass : kExitNumeric;
    }

    // check
    CheckOptions opt;
    opt.seed = settings.seed;
    opt.samples = settings.samples;
    opt.tol = tol;
    Json j = envelope("check", settings, tol);
    j["kind"] = kind;
    auto need = [&](std::size_t n, const char* usage) {
      if (files.size() != n) throw InvalidArgument(std::string("check ") + kind + " expects " + usage);
    };

    if (kind == "enumerate-normals") {
      need(1, "CONE");
      const Cone k = parse_cone(read_json_file(files[0]));
      j["cone"] = to_json(k);
      Json fams = Json::array();
      for (const NormalFamily& f : enumerate_invariant_normals(k, tol.abs)) fams.push_back(to_json(f));
      j["families"] = fams;
      j["clauses"] = {"pair-cone-intersection", "generator-ray", "dual-ray"};
      emit(j);
      return kExitPass;
    }
    if (kind == "classify-normal") {
      need(2, "NORMAL CONE");
      const Vector a = parse_normal(read_json_file(files[0]));
      const Cone k = parse_cone(read_json_file(files[1]));
      const NormalClass c = classify_normal(k, a, tol.abs);
      const InvarianceMargins m = hyperplane_invariance_margins(k, a);
      j["cone"] = to_json(k);
      j["normal"] = to_json(a);
      j["classification"] = to_json(c);
      j["product_rule_margin"] = m.margin;
      j["clauses"] = {"hyperplane-product-rule", "pair-cone-intersection", "generator-ray", "dual-ray"};
      // both routes must agree outside the guard band
      const bool rule = m.margin <= tol.abs;
      const bool banded = m.margin > tol.abs && m.margin <= 10 * tol.abs;
      j["consistent"] = banded || rule == (c.kind != NormalCase::NotInvariant);
      emit(j);
      if (!j["consistent"].get<bool>()) return kExitNumeric;
      if (banded) return kExitInconclusive;
      return c.kind == NormalCase::NotInvariant ? kExitRefuted : kExitPass;
    }
    if (kind == "lorentz-product") {
      need(1, "SET");
      const ConvexSet s = parse_set(read_json_file(files[0]));
      j["set"] = to_json(s);
      const CheckReport r = lorentz_product_check(s, opt);
      j["report"] = to_json(r);
      emit(j);
      return exit_for(r);
    }

    need(2, "SET CONE");
    const ConvexSet s = parse_set(read_json_file(files[0]));
    const Cone k = parse_cone(read_json_file(files[1]));
    j["set"] = to_json(s);
    j["cone"] = to_json(k);
    CheckReport r;
    if (kind == "invariant") {
      r = set_invariant(s, k, opt);
    } else if (kind == "isotone") {
      r = isotone_test(s, k, opt);
    } else if (kind == "sublattice") {
      r = sublattice_test(s, k, opt);
    } else {
      const auto* p = std::get_if<Polyhedron>(&s);
      if (!p) throw InvalidArgument("tangent-facets expects a polyhedron");
      r = tangent_facets_invariant(*p, k, opt);
    }
    j["report"] = to_json(r);
    emit(j);
    return exit_for(r);
  } catch (const NumericError& e) {
    err << "isocone: numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const Error& e) {
    err << "isocone: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const nlohmann::json::exception& e) {
    err << "isocone: " << e.what() << "\n";
    return kExitInvalid;
  }
}

}  // namespace isocone
