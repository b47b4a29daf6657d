#pragma once

#include "tga/ideals.hpp"
#include "tga/json_io.hpp"
#include "tga/simplicity.hpp"

#include <CLI11.hpp>
#include <Eigen/Dense>

#include <complex>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace tga {

struct CliResult {
  int code = 0;
  std::string output;  // the report (json or text)
  std::string error;   // diagnostics for stderr
};

namespace cli_detail {

constexpr double kPositivityFloor = -1e-10;

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(unsigned long long seed) : gen(seed) {}

  long long integer(long long lo, long long hi) {
    std::uniform_int_distribution<long long> d(lo, hi);
    return d(gen);
  }
  Rat rational(long long max_num = 6, long long max_den = 6) {
    return Rat(Int(integer(-max_num, max_num)), Int(integer(1, max_den)));
  }
  Rat quarter_turn() { return Rat(Int(integer(0, 3)), Int(4)); }
};

template <class K>
std::complex<double> to_complex(const K& z) {
  return {static_cast<double>(scalar_re(z)), static_cast<double>(scalar_im(z))};
}

template <class K>
K random_scalar(Rng& rng) {
  const Rat re = rng.rational(), im = rng.rational();
  if constexpr (ScalarTraits<K>::exact)
    return GaussianRational{re, im};
  else
    return std::complex<double>(static_cast<double>(re), static_cast<double>(im));
}

template <class K>
ModuleElement<K> random_element(const CorrespondenceModel<K>& m, Rng& rng) {
  std::map<std::string, K> coords;
  for (const Edge& e : m.graph.edges) coords[e.id] = random_scalar<K>(rng);
  return element_from_coords(m, coords);
}

template <class K>
VertexFunction<K> random_vertex_function(const CorrespondenceModel<K>& m, Rng& rng) {
  VertexFunction<K> f;
  for (const auto& v : m.graph.vertices) f[v] = random_scalar<K>(rng);
  return f;
}

// Nonnegative function whose values are squares of rationals: admits an exact
// square root under the default (indicator) partition.
template <class K>
VertexFunction<K> random_square_function(const CorrespondenceModel<K>& m, Rng& rng) {
  VertexFunction<K> f;
  for (const auto& v : m.graph.vertices) {
    const Rat r = rng.rational(3, 3);
    f[v] = scalar_from_rat<K>(r * r);
  }
  return f;
}

template <class K>
ChartUnits<K> random_chart_units(const CorrespondenceModel<K>& m, Rng& rng) {
  ChartUnits<K> b;
  for (const auto& [chart, edges] : m.cover)
    for (const auto& e : edges) b[chart][e] = unit_phase<K>(rng.quarter_turn());
  return b;
}

template <class K>
bool vertex_functions_close(const CorrespondenceModel<K>& m, const VertexFunction<K>& a,
                            const VertexFunction<K>& b, double tol) {
  auto value = [](const VertexFunction<K>& f, const std::string& v) {
    const auto it = f.find(v);
    return it == f.end() ? K(0) : it->second;
  };
  for (const auto& v : m.graph.vertices)
    if (!scalar_close(value(a, v), value(b, v), tol)) return false;
  return true;
}

inline double min_hermitian_eigenvalue(const std::vector<std::vector<std::complex<double>>>& g) {
  const Eigen::Index n = static_cast<Eigen::Index>(g.size());
  Eigen::MatrixXcd mat(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) mat(i, j) = g[i][j];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(mat);
  return es.eigenvalues().minCoeff();
}

// The full identity suite over one model.  Float models check to `tol`
// (positivity to the fixed floor); exact models compare exactly.
template <class K>
Json run_model_suite(const CorrespondenceModel<K>& m, double tol, int tensor_n,
                     unsigned long long seed, std::size_t max_vertices) {
  validate_model(m, tol);
  Rng rng(seed);
  Json checks = Json::array();
  bool all_ok = true;
  auto record = [&](const std::string& name, bool ok) {
    checks.push_back({{"name", name}, {"ok", ok}});
    all_ok = all_ok && ok;
  };
  const double eq_tol = ScalarTraits<K>::exact ? 0.0 : tol;

  const ModuleElement<K> x = random_element(m, rng);
  const ModuleElement<K> y = random_element(m, rng);
  const ModuleElement<K> z = random_element(m, rng);
  const VertexFunction<K> f = random_vertex_function(m, rng);
  const VertexFunction<K> g = random_vertex_function(m, rng);

  {  // <x,y> = conj(<y,x>)
    const auto xy = inner_product(m, x, y, eq_tol);
    const auto yx = inner_product(m, y, x, eq_tol);
    bool ok = true;
    for (const auto& v : m.graph.vertices) {
      const auto a = xy.count(v) ? xy.at(v) : K(0);
      const auto b = yx.count(v) ? yx.at(v) : K(0);
      if (!scalar_close(a, scalar_conj(b), eq_tol)) ok = false;
    }
    record("inner-product-hermitian", ok);
  }

  {  // per-edge terms agree in every chart containing the edge
    bool ok = true;
    for (const Edge& e : m.graph.edges) {
      std::vector<K> terms;
      for (const auto& c : m.charts)
        if (m.cover.count(c) && m.cover.at(c).count(e.id))
          terms.push_back(scalar_conj(x.at(c, e.id)) * y.at(c, e.id));
      for (const K& t : terms)
        if (!scalar_close(t, terms.front(), eq_tol)) ok = false;
    }
    record("inner-product-chart-independent", ok);
  }

  {  // Gram positivity at every vertex
    const std::vector<ModuleElement<K>> xs{x, y, z};
    bool ok = true;
    for (const auto& v : m.graph.vertices) {
      std::vector<std::vector<std::complex<double>>> gram(
          xs.size(), std::vector<std::complex<double>>(xs.size()));
      for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = 0; j < xs.size(); ++j) {
          const auto ip = inner_product(m, xs[i], xs[j], eq_tol);
          gram[i][j] = ip.count(v) ? to_complex(ip.at(v)) : std::complex<double>(0);
        }
      if (min_hermitian_eigenvalue(gram) < kPositivityFloor) ok = false;
    }
    record("gram-positive", ok);
  }

  {  // max_v |<x,y>| <= ||x|| ||y||
    auto sup = [&](const VertexFunction<K>& h) {
      double s = 0;
      for (const auto& [v, val] : h) s = std::max(s, std::abs(to_complex(val)));
      return s;
    };
    auto norm = [&](const ModuleElement<K>& e) {
      return std::sqrt(sup(inner_product(m, e, e, eq_tol)));
    };
    record("cauchy-schwarz",
           sup(inner_product(m, x, y, eq_tol)) <= norm(x) * norm(y) + 1e-9);
  }

  {  // <conj(f).y, x> = <y, f.x>
    VertexFunction<K> fconj;
    for (const auto& [v, val] : f) fconj[v] = scalar_conj(val);
    const auto lhs = inner_product(m, left_action(m, fconj, y), x, eq_tol);
    const auto rhs = inner_product(m, y, left_action(m, f, x), eq_tol);
    record("adjoint-relation", vertex_functions_close(m, lhs, rhs, eq_tol));
  }

  {  // phi(fg) = phi(f)phi(g), phi(conj f) = phi(f)*
    VertexFunction<K> fg, fconj;
    for (const auto& [v, val] : f) {
      fg[v] = val * (g.count(v) ? g.at(v) : K(0));
      fconj[v] = scalar_conj(val);
    }
    const bool mult = operator_close(
        m, phi_matrix(m, fg), operator_compose(m, phi_matrix(m, f), phi_matrix(m, g)), eq_tol);
    const bool star =
        operator_close(m, phi_matrix(m, fconj), operator_adjoint(phi_matrix(m, f)), eq_tol);
    record("phi-star-homomorphism", mult && star);
  }

  {  // Theta_{x,y} z = x . <y,z>
    const auto direct = operator_apply(m, rank_one(m, x, y, eq_tol), z, eq_tol);
    const auto via_action = right_action(m, x, inner_product(m, y, z, eq_tol));
    record("rank-one-formula", element_close(m, direct, via_action, eq_tol));
  }

  {  // sum of rank-one terms reconstructs phi(f) for f >= 0
    const VertexFunction<K> h = random_square_function(m, rng);
    FiberedOperator<K> sum;
    for (const auto& w : phi_decomposition(m, h, eq_tol))
      sum = operator_add(m, sum, rank_one(m, w, w, eq_tol));
    record("phi-decomposition", operator_close(m, sum, phi_matrix(m, h), eq_tol));
  }

  {  // x = sum of induced sections of its chart-local pieces
    ModuleElement<K> sum;
    for (const auto& [chart, local] : induced_decomposition(m, x, eq_tol))
      sum = element_add(m, sum, induced_section(m, chart, local));
    record("induced-reconstruction", element_close(m, sum, x, eq_tol));
  }

  {  // tensor inner products against the path-space model
    bool ok = true;
    for (int n = 2; n <= tensor_n; ++n) {
      const CorrespondenceModel<K> pm = path_model(m, n);
      const PathSpaceGraph ps = path_space(m.graph, n);
      std::vector<const Path*> all;
      for (const Path& p : ps.paths) all.push_back(&p);
      for (const Path* p : all)
        for (const Path* q : all) {
          if (p->source != q->source) continue;
          std::vector<ModuleElement<K>> xs, ys;
          for (const auto& e : p->edges) xs.push_back(basis_delta(m, e));
          for (const auto& e : q->edges) ys.push_back(basis_delta(m, e));
          const auto recursive = tensor_inner(m, xs, ys, eq_tol);
          const auto direct =
              inner_product(pm, diamond(pm, xs), diamond(pm, ys), eq_tol);
          if (!vertex_functions_close(pm, recursive, direct, eq_tol)) ok = false;
        }
    }
    record("tensor-inner", ok);
  }

  {  // coboundary retwist: U preserves inner products and both actions
    const ChartUnits<K> b = random_chart_units(m, rng);
    const CorrespondenceModel<K> m2 = twist_by_coboundary(m, b, eq_tol);
    const auto ux = coboundary_unitary(m, m2, b, x, eq_tol);
    const auto uy = coboundary_unitary(m, m2, b, y, eq_tol);
    const bool inner_ok = vertex_functions_close(
        m, inner_product(m2, ux, uy, eq_tol), inner_product(m, x, y, eq_tol), eq_tol);
    const bool left_ok = element_close(
        m2, coboundary_unitary(m, m2, b, left_action(m, f, x), eq_tol),
        left_action(m2, f, ux), eq_tol);
    const bool right_ok = element_close(
        m2, coboundary_unitary(m, m2, b, right_action(m, x, f), eq_tol),
        right_action(m2, ux, f), eq_tol);
    record("coboundary-unitary", inner_ok && left_ok && right_ok);
  }

  {  // restriction to invariant vertex sets
    bool ok = true;
    for (const auto& f0 : invariant_sets(m.graph, max_vertices)) {
      const auto a = rank_one(m, x, y, eq_tol);
      const auto bop = phi_matrix(m, f);
      const bool mult = operator_close(
          m, restriction_omega(m, operator_compose(m, a, bop), f0),
          operator_compose(m, restriction_omega(m, a, f0), restriction_omega(m, bop, f0)),
          eq_tol);
      const bool star = operator_close(m, restriction_omega(m, operator_adjoint(a), f0),
                                       operator_adjoint(restriction_omega(m, a, f0)), eq_tol);
      // omega(Theta_{x,y}) = Theta over the restricted sections
      const CorrespondenceModel<K> sub = submodel(m, f0);
      std::map<std::string, K> cx, cy;
      const auto full_cx = coords_of(m, x), full_cy = coords_of(m, y);
      for (const Edge& e : sub.graph.edges) {
        cx[e.id] = full_cx.at(e.id);
        cy[e.id] = full_cy.at(e.id);
      }
      const auto theta_sub = rank_one(sub, element_from_coords(sub, cx),
                                      element_from_coords(sub, cy), eq_tol);
      bool theta_ok = true;
      for (const Edge& e1 : sub.graph.edges)
        for (const Edge& e2 : sub.graph.edges) {
          if (e1.src != e2.src) continue;
          const K lhs = operator_entry(sub, theta_sub, e1.id, e2.id);
          const K rhs = operator_entry(m, restriction_omega(m, a, f0), e1.id, e2.id);
          if (!scalar_close(lhs, rhs, eq_tol)) theta_ok = false;
        }
      ok = ok && mult && star && theta_ok;
    }
    record("restriction-omega", ok);
  }

  Json out;
  out["checks"] = std::move(checks);
  out["all_ok"] = all_ok;
  out["arithmetic"] = ScalarTraits<K>::exact ? "exact" : "float";
  out["seed"] = seed;
  out["tensor_n"] = tensor_n;
  return out;
}

inline void render_text(const Json& j, const std::string& prefix, std::string& out) {
  auto label = [&](const std::string& key) { return prefix.empty() ? key : prefix + "." + key; };
  if (j.is_object()) {
    if (j.empty()) out += prefix + " = {}\n";
    for (auto it = j.begin(); it != j.end(); ++it) render_text(it.value(), label(it.key()), out);
    return;
  }
  if (j.is_array()) {
    bool flat = true;
    for (const auto& v : j)
      if (v.is_object() || v.is_array()) flat = false;
    if (flat) {
      out += prefix + " = " + j.dump() + "\n";
    } else {
      std::size_t i = 0;
      for (const auto& v : j) render_text(v, prefix + "[" + std::to_string(i++) + "]", out);
    }
    return;
  }
  out += prefix + " = " + j.dump() + "\n";
}

}  // namespace cli_detail

inline unsigned long long env_seed() {
  const char* s = std::getenv("TGA_SEED");
  if (!s || !*s) return 0;
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw SchemaError("TGA_SEED: not an unsigned integer");
  }
}

// In-process entry point used by the binary and the tests.  args excludes
// argv[0].  Exit codes: 0 analysis completed, 2 schema error, 3 precondition
// error.
inline CliResult run_command(const std::vector<std::string>& args) {
  CLI::App app{"desk-scale analysis of twisted topological graph algebras", "tga"};
  app.require_subcommand(1);

  std::string input, out_path, format = "json";
  double tolerance = 1e-9;
  int max_vertices = 20;
  int n = 2;
  std::vector<std::string> surgery_y;
  bool exact = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("input", input, "input JSON document")->required();
    sub->add_option("--out", out_path, "write the report to this path");
    sub->add_option("--format", format, "report format")
        ->check(CLI::IsMember({"json", "text"}));
    sub->add_option("--tolerance", tolerance, "float comparison tolerance");
    sub->add_option("--max-vertices", max_vertices, "brute-force enumeration guard")
        ->check(CLI::PositiveNumber);
    return sub;
  };

  add_common(app.add_subcommand("classify", "vertex classification of a graph"));
  auto* paths_cmd = add_common(app.add_subcommand("paths", "enumerate the length-n path space"));
  paths_cmd->add_option("--n", n, "path length")->required()->check(CLI::PositiveNumber);
  add_common(app.add_subcommand("cycles", "simple cycles, entrances, topological freeness"));
  auto* surgery_cmd = add_common(app.add_subcommand("surgery", "two-level vertex surgery"));
  surgery_cmd->add_option("--y", surgery_y, "regular vertices to duplicate")
      ->delimiter(',');
  add_common(app.add_subcommand("cocycle-check", "verify the cocycle condition"));
  add_common(app.add_subcommand("cohomology", "H^2 of a simplicial space"));
  add_common(
      app.add_subcommand("classify-cocycle", "cohomology class and trivialization attempt"));
  add_common(app.add_subcommand("bundle", "circle bundle invariants from clutching data"));
  add_common(app.add_subcommand("ideals", "invariant sets and admissible pairs"));
  add_common(app.add_subcommand("simplicity", "simplicity verdict with witnesses"));
  auto* verify_cmd = add_common(
      app.add_subcommand("verify-correspondence", "run the module identity suite on a model"));
  verify_cmd->add_flag("--exact", exact, "use exact Gaussian-rational arithmetic");
  verify_cmd->add_option("--n", n, "tensor power bound (<= 3)")->check(CLI::Range(1, 3));

  CliResult result;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    result.output = app.help();
    return result;
  } catch (const CLI::ParseError& e) {
    result.code = 2;
    result.error = std::string("argument error: ") + e.what();
    return result;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    std::ifstream stream(input);
    if (!stream) throw SchemaError("cannot read input file '" + input + "'");
    std::stringstream buffer;
    buffer << stream.rdbuf();
    const Json in = parse_json(buffer.str());

    Json payload;
    if (command == "classify") {
      payload["classification"] = classification_to_json(classify_vertices(graph_from_json(in)));
    } else if (command == "paths") {
      const PathSpaceGraph ps = path_space(graph_from_json(in), n);
      Json paths = Json::array();
      for (const Path& p : ps.paths)
        paths.push_back({{"edges", p.edges}, {"range", p.range}, {"source", p.source}});
      payload = {{"n", n}, {"count", ps.paths.size()}, {"paths", paths}};
    } else if (command == "cycles") {
      const DiscreteGraph g = graph_from_json(in);
      Json cycles = Json::array();
      std::size_t entrance_free = 0;
      for (const Cycle& c : simple_cycles(g)) {
        cycles.push_back(cycle_to_json(g, c));
        if (!cycle_has_entrance(g, c)) ++entrance_free;
      }
      payload = {{"cycles", cycles},
                 {"entrance_free_count", entrance_free},
                 {"topologically_free", is_topologically_free(g)}};
    } else if (command == "surgery") {
      const DiscreteGraph g = graph_from_json(in);
      const std::set<std::string> y(surgery_y.begin(), surgery_y.end());
      payload["graph"] = graph_to_json(graph_surgery(g, y));
    } else if (command == "cocycle-check") {
      const CocycleDocument doc = cocycle_from_json(in);
      const CocycleReport report = check_cocycle(doc.cover, doc.cocycle);
      Json violations = Json::array();
      for (const auto& v : report.violations)
        violations.push_back(
            {{"charts", {v.triple[0], v.triple[1], v.triple[2]}}, {"defect", to_string(v.defect)}});
      payload = {{"ok", report.ok}, {"violations", violations}};
    } else if (command == "cohomology") {
      SimplicialSpace x;
      if (in.is_object() && in.contains("space")) {
        jio::check_keys(in, {"space"}, "cohomology document");
        x = space_from_json(in["space"]);
      } else {
        x = space_from_json(in);
      }
      payload["H2"] = abelian_to_json(cohomology_h2(x));
    } else if (command == "classify-cocycle") {
      const CocycleDocument doc = cocycle_from_json(in);
      payload["class"] = cocycle_class_to_json(classify_cocycle(doc.cover, doc.cocycle));
      payload["trivialization"] = trivialize_to_json(trivialize(doc.cover, doc.cocycle));
    } else if (command == "bundle") {
      const CircleBundle b = bundle_from_json(in);
      const GroupPresentation p = pi1_presentation(b);
      payload["base"] = b.base == CircleBundle::Base::Surface ? "surface" : "discrete";
      payload["components"] = component_count(b);
      if (b.base == CircleBundle::Base::Surface) {
        payload["genus"] = b.genus;
        payload["euler"] = euler_number(b);
      }
      payload["pi1_presentation"] = p.to_string();
      payload["pi1_abelianization"] = abelian_to_json(abelianization(p));
    } else if (command == "ideals") {
      const DiscreteGraph g = graph_from_json(in);
      Json sets = Json::array();
      for (const auto& f0 : invariant_sets(g, max_vertices)) sets.push_back(f0);
      Json pairs = Json::array();
      const auto aps = admissible_pairs(g, max_vertices);
      for (const auto& p : aps) pairs.push_back({{"F0", p.f0}, {"Z", p.z}});
      payload = {{"invariant_sets", sets}, {"pairs", pairs}, {"ideal_count", aps.size()}};
    } else if (command == "simplicity") {
      // Twisting data (cover/cocycle keys) is legal here and ignored: the
      // verdict is cocycle-independent.
      Json graph_part = in;
      graph_part.erase("cover");
      graph_part.erase("cocycle");
      const DiscreteGraph g = graph_from_json(graph_part);
      const SimplicityReport r = simplicity_verdict(g, static_cast<std::size_t>(max_vertices));
      Json witnesses = Json::array();
      for (const Cycle& c : r.entrance_free_cycles) witnesses.push_back(cycle_to_json(g, c));
      payload = {{"simple", r.simple},
                 {"minimal", r.minimal},
                 {"topologically_free", r.topologically_free},
                 {"generated_by_cycle", r.generated_by_cycle},
                 {"admissible_pair_count", r.admissible_pair_count},
                 {"entrance_free_cycles", witnesses},
                 {"twist_note", r.twist_note}};
    } else if (command == "verify-correspondence") {
      const unsigned long long seed = env_seed();
      if (exact) {
        const auto m = model_from_json<GaussianRational>(in);
        payload = cli_detail::run_model_suite(m, tolerance, n, seed,
                                              static_cast<std::size_t>(max_vertices));
      } else {
        const auto m = model_from_json<std::complex<double>>(in);
        payload = cli_detail::run_model_suite(m, tolerance, n, seed,
                                              static_cast<std::size_t>(max_vertices));
      }
    }

    Json report;
    report["schema"] = "tga/1";
    report["command"] = command;
    report["tolerances"] = {{"float", tolerance},
                            {"positivity_floor", -cli_detail::kPositivityFloor}};
    for (auto it = payload.begin(); it != payload.end(); ++it) report[it.key()] = it.value();

    if (format == "text") {
      std::string text;
      cli_detail::render_text(report, "", text);
      result.output = text;
    } else {
      result.output = dump_json(report);
    }
    if (!out_path.empty()) {
      std::ofstream sink(out_path, std::ios::binary);
      if (!sink) throw PreconditionError("cannot write output file '" + out_path + "'");
      sink << result.output;
    }
    return result;
  } catch (const SchemaError& e) {
    result.code = 2;
    result.error = std::string("schema error: ") + e.what();
  } catch (const PreconditionError& e) {
    result.code = 3;
    result.error = std::string("precondition error: ") + e.what();
  } catch (const Error& e) {
    result.code = 3;
    result.error = e.what();
  }
  return result;
}

}  // namespace tga
