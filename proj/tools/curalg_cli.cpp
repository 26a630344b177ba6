// curalg: exact computations with current-algebra modules.
//
// Subcommands map one-to-one onto library operations; every report is JSON
// with deterministic field order, rationals serialized as "p/q" text.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <set>
#include <string>

#include "curalg/constructions.hpp"
#include "curalg/extcalc.hpp"
#include "curalg/io.hpp"

using namespace curalg;
using io::json;

namespace {

struct GlobalOptions {
  FreeLieOptions freelie;
  std::string out_path;
};

void emit(const GlobalOptions& g, const json& report) {
  if (g.out_path.empty()) {
    std::cout << report.dump(2) << "\n";
  } else {
    io::write_json_file(g.out_path, report);
  }
}

// input/usage errors exit 2; failed mathematical assertions exit 1
int exit_code_for(const std::string& code) {
  static const std::set<std::string> usage{errc::PARSE_ERROR, errc::SIZE_LIMIT,
                                           errc::PRECONDITION, errc::BAD_RANK,
                                           errc::DIV_BY_ZERO, errc::AMBIENT_MISMATCH};
  return usage.count(code) ? 2 : 1;
}

json error_report(const Error& e) {
  json j;
  j["error"] = e.code();
  j["witness"] = e.witness();
  if (!e.detail().empty()) j["detail"] = e.detail();
  return j;
}

struct ResolvedModule {
  ContextPtr ctx;
  PairModule module;
  std::string algebra_tag;  // empty when file-based
};

ResolvedModule resolve_module(const std::string& ref, const GlobalOptions& g,
                              ContextPtr fallback_ctx = nullptr,
                              std::string fallback_tag = {}) {
  if (auto bm = io::builtin_module(ref, fallback_ctx, fallback_tag, g.freelie))
    return {bm->ctx, std::move(bm->module), bm->algebra_tag};
  json j = io::load_json_file(ref);
  const std::string alg_ref = j.at("algebra").get<std::string>();
  ContextPtr ctx;
  std::string tag;
  if (fallback_ctx && alg_ref == fallback_tag) {
    ctx = fallback_ctx;
    tag = fallback_tag;
  } else {
    ctx = make_context(io::resolve_algebra(alg_ref), g.freelie);
    tag = io::builtin_algebra(alg_ref) ? alg_ref : std::string{};
  }
  return {ctx, io::module_from_json(ctx, j), tag};
}

std::pair<ResolvedModule, ResolvedModule> resolve_pair(const std::string& r1,
                                                       const std::string& r2,
                                                       const GlobalOptions& g) {
  const bool m1_trivial = (r1 == "builtin:trivial");
  if (m1_trivial) {
    ResolvedModule m2 = resolve_module(r2, g);
    ResolvedModule m1 = resolve_module(r1, g, m2.ctx, m2.algebra_tag);
    return {std::move(m1), std::move(m2)};
  }
  ResolvedModule m1 = resolve_module(r1, g);
  ResolvedModule m2 = resolve_module(r2, g, m1.ctx, m1.algebra_tag);
  return {std::move(m1), std::move(m2)};
}

std::vector<Rational> parse_rational_list(const std::string& s) {
  std::vector<Rational> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(Rational::parse(cur));
      cur.clear();
    } else if (!isspace(c)) {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(Rational::parse(cur));
  return out;
}

json report_of(const GradedModuleReport& r) {
  json j;
  j["total_dim"] = r.total_dim;
  j["per_degree"] = r.per_degree;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact current-algebra module computations"};
  app.require_subcommand(1);

  GlobalOptions g;
  if (const char* env = std::getenv("CURALG_MAX_MONOMIALS"))
    g.freelie.max_monomials = std::strtoull(env, nullptr, 10);
  app.add_option("--max-monomials", g.freelie.max_monomials,
                 "cap on d^r monomial counts (env CURALG_MAX_MONOMIALS)");
  app.add_option("--max-degree", g.freelie.max_degree, "cap on tensor degrees");
  app.add_option("--out", g.out_path, "write the JSON report here instead of stdout");

  // ---- check-algebra ----
  auto* cmd_check = app.add_subcommand("check-algebra", "validate a structure-constant file");
  std::string check_ref;
  cmd_check->add_option("--algebra", check_ref, "builtin tag or file path")->required();

  // ---- freelie ----
  auto* cmd_freelie = app.add_subcommand("freelie", "free Lie dimensions per degree");
  int fl_d = 0, fl_maxr = 0;
  std::string fl_alg;
  cmd_freelie->add_option("--d", fl_d, "alphabet dimension")->required();
  cmd_freelie->add_option("--max-r", fl_maxr, "largest degree")->required();
  cmd_freelie->add_option("--algebra", fl_alg, "also report tau ranks for this algebra");

  // ---- kertau ----
  auto* cmd_kertau = app.add_subcommand("kertau", "kernel of tau_r for an algebra");
  std::string kt_alg;
  int kt_r = 0;
  cmd_kertau->add_option("--algebra", kt_alg)->required();
  cmd_kertau->add_option("--r", kt_r)->required();

  // ---- truncdim ----
  auto* cmd_trunc = app.add_subcommand("truncdim", "truncated current algebra dimension");
  std::string td_alg;
  int td_k = 0;
  cmd_trunc->add_option("--algebra", td_alg)->required();
  cmd_trunc->add_option("--k", td_k)->required();

  // ---- verify ----
  auto* cmd_verify = app.add_subcommand("verify", "check (C1)-(C3) for a module file");
  std::string vf_ref;
  int vf_R = 6;
  cmd_verify->add_option("--module", vf_ref)->required();
  cmd_verify->add_option("--R", vf_R, "degree bound for (C3)");

  // ---- build ----
  auto* cmd_build = app.add_subcommand("build", "run a module construction");
  std::string b_kind, b_alg = "sl2", b_rep = "nat", b_point = "0", b_out;
  int b_N = 2, b_r = 2;
  cmd_build->add_option("--construction", b_kind,
                        "eval | sym | sym-dual | tensor-free | kr | kostant | kostant-dual")
      ->required();
  cmd_build->add_option("--algebra", b_alg);
  cmd_build->add_option("--rep", b_rep, "nat | ad (eval and kostant)");
  cmd_build->add_option("--point", b_point, "evaluation point");
  cmd_build->add_option("--N", b_N, "truncation degree");
  cmd_build->add_option("--r", b_r, "KR parameter");
  cmd_build->add_option("--module-out", b_out, "write the module file here");

  // ---- act ----
  auto* cmd_act = app.add_subcommand("act", "apply x t^r to a vector");
  std::string act_ref, act_vec;
  int act_x = 0, act_r = 0;
  cmd_act->add_option("--module", act_ref)->required();
  cmd_act->add_option("--x", act_x, "basis index")->required();
  cmd_act->add_option("--r", act_r)->required();
  cmd_act->add_option("--vec", act_vec, "comma-separated rationals")->required();

  // ---- hom ----
  auto* cmd_hom = app.add_subcommand("hom", "Hom_{a[t]} between two modules");
  std::string hom_m1, hom_m2;
  bool hom_lie_only = false;
  cmd_hom->add_option("--m1", hom_m1)->required();
  cmd_hom->add_option("--m2", hom_m2)->required();
  cmd_hom->add_flag("--lie-only", hom_lie_only, "plain Hom_a of the underlying reps");

  // ---- iso ----
  auto* cmd_iso = app.add_subcommand("iso", "search for a module isomorphism");
  std::string iso_m1, iso_m2;
  std::uint64_t iso_seed = 0;
  cmd_iso->add_option("--m1", iso_m1)->required();
  cmd_iso->add_option("--m2", iso_m2)->required();
  cmd_iso->add_option("--seed", iso_seed);

  // ---- annihilate ----
  auto* cmd_ann = app.add_subcommand("annihilate", "test (t-a_1)...(t-a_k) annihilation");
  std::string ann_ref, ann_roots;
  int ann_R = 0;
  cmd_ann->add_option("--module", ann_ref)->required();
  cmd_ann->add_option("--roots", ann_roots, "comma-separated points")->required();
  cmd_ann->add_option("--R", ann_R, "certificate cover to require (default: #roots)");

  // ---- highest ----
  auto* cmd_high = app.add_subcommand("highest", "joint highest-weight vectors");
  std::string high_ref;
  cmd_high->add_option("--module", high_ref)->required();

  // ---- ext ----
  auto* cmd_ext = app.add_subcommand("ext", "Ext^1 between two modules");
  std::string ext_m1, ext_m2;
  int ext_R = 6, ext_S = 3;
  cmd_ext->add_option("--m1", ext_m1)->required();
  cmd_ext->add_option("--m2", ext_m2)->required();
  cmd_ext->add_option("--R", ext_R);
  cmd_ext->add_option("--S", ext_S, "stabilization window");

  // ---- ext-irr ----
  auto* cmd_extirr = app.add_subcommand("ext-irr", "Ext^1 by the irreducibles formula");
  std::string ei_v1, ei_v2, ei_points;
  int ei_R = 6;
  cmd_extirr->add_option("--v1", ei_v1)->required();
  cmd_extirr->add_option("--v2", ei_v2)->required();
  cmd_extirr->add_option("--points", ei_points, "evaluation points of the factors")->required();
  cmd_extirr->add_option("--R", ei_R);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (cmd_check->parsed()) {
      AlgebraPtr L = io::resolve_algebra(check_ref);
      json j;
      j["ok"] = true;
      j["dim"] = L->dim();
      j["perfect"] = is_perfect(*L);
      j["triangular"] = L->triangular().has_value();
      emit(g, j);
      return 0;
    }
    if (cmd_freelie->parsed()) {
      json rows = json::array();
      ContextPtr ctx;
      if (!fl_alg.empty()) ctx = make_context(io::resolve_algebra(fl_alg), g.freelie);
      for (int r = 1; r <= fl_maxr; ++r) {
        json row;
        row["d"] = fl_d;
        row["r"] = r;
        if (ctx) {
          if (static_cast<int>(ctx->algebra().dim()) != fl_d)
            throw Error(errc::PRECONDITION, "--d must equal dim of --algebra");
          row["dimF"] = ctx->free_degree(r).dim();
          row["rank_tau"] = ctx->tau_rank(r);
          row["dim_ker"] = ctx->free_degree(r).dim() - ctx->tau_rank(r);
        } else {
          row["dimF"] = lyndon_degree(fl_d, r, g.freelie).dim();
        }
        rows.push_back(std::move(row));
      }
      json j;
      j["rows"] = std::move(rows);
      emit(g, j);
      return 0;
    }
    if (cmd_kertau->parsed()) {
      ContextPtr ctx = make_context(io::resolve_algebra(kt_alg), g.freelie);
      json j;
      j["d"] = ctx->algebra().dim();
      j["r"] = kt_r;
      j["dimF"] = ctx->free_degree(kt_r).dim();
      j["rank_tau"] = ctx->tau_rank(kt_r);
      j["dim_ker"] = ctx->ker_tau_tensor(kt_r).dim();
      emit(g, j);
      return 0;
    }
    if (cmd_trunc->parsed()) {
      ContextPtr ctx = make_context(io::resolve_algebra(td_alg), g.freelie);
      json j;
      j["k"] = td_k;
      j["dim"] = truncated_current_dim(*ctx, td_k);
      emit(g, j);
      return 0;
    }
    if (cmd_verify->parsed()) {
      json mj = io::load_json_file(vf_ref);
      ContextPtr ctx =
          make_context(io::resolve_algebra(mj.at("algebra").get<std::string>()), g.freelie);
      // bypass the loader's equivariance check: verify reports it instead
      const std::size_t n = mj.at("dim").get<std::size_t>();
      std::vector<MatrixQ> rho_mats, eta;
      for (const auto& m : mj.at("rho")) rho_mats.push_back(io::matrix_from(m));
      for (const auto& m : mj.at("eta")) eta.push_back(io::matrix_from(m));
      for (const auto& m : rho_mats)
        if (m.rows() != n || m.cols() != n)
          throw Error(errc::PARSE_ERROR, "module file dim disagrees with its matrices");
      Rep rho(ctx->algebra_ptr(), std::move(rho_mats), /*check=*/false);
      VerifyOutcome out = verify_pair(ctx, rho, eta, vf_R);
      if (!out.ok()) {
        json j;
        j["error"] = out.failure->code;
        j["witness"] = out.failure->witness;
        if (!out.failure->detail.empty()) j["detail"] = out.failure->detail;
        emit(g, j);
        return 1;
      }
      json j;
      j["ok"] = true;
      j["certificate"] = io::certificate_to_json(out.module->certificate());
      emit(g, j);
      return 0;
    }
    if (cmd_build->parsed()) {
      ContextPtr ctx = make_context(io::resolve_algebra(b_alg), g.freelie);
      auto rep_of = [&]() {
        if (b_rep == "ad") return adjoint_rep(ctx->algebra_ptr());
        if (b_rep == "trivial") return trivial_rep(ctx->algebra_ptr());
        return io::builtin_natural_rep(ctx->algebra_ptr(), b_alg);
      };
      json j;
      j["construction"] = b_kind;
      std::optional<PairModule> built;
      if (b_kind == "eval") {
        built = evaluation_module(ctx, rep_of(), Rational::parse(b_point));
        j["total_dim"] = built->dim();
      } else if (b_kind == "sym") {
        GradedModule gm = ideal_module_sym(ctx, IdealSpec{IdealSpec::Flavor::Symmetric, {}, {}, false}, b_N);
        j.update(report_of(gm.report));
        built = std::move(gm.module);
      } else if (b_kind == "sym-dual") {
        GradedModule gm = sym_dual_module(ctx, b_N);
        j.update(report_of(gm.report));
        built = std::move(gm.module);
      } else if (b_kind == "tensor-free") {
        GradedModule gm = ideal_module_tensor(ctx, IdealSpec{}, b_N);
        j.update(report_of(gm.report));
        built = std::move(gm.module);
      } else if (b_kind == "kr") {
        GradedModule gm = kr_module(ctx, b_r);
        j.update(report_of(gm.report));
        built = std::move(gm.module);
      } else if (b_kind == "kostant" || b_kind == "kostant-dual") {
        KostantModule km = (b_kind == "kostant") ? kostant_module(ctx, rep_of())
                                                 : kostant_dual_module(ctx, rep_of());
        j.update(report_of(km.graded.report));
        built = std::move(km.graded.module);
      } else {
        throw Error(errc::PARSE_ERROR, "unknown construction: " + b_kind);
      }
      j["certificate"] = io::certificate_to_json(built->certificate());
      if (!b_out.empty()) {
        io::write_json_file(b_out, io::module_to_json(*built, b_alg));
        j["module_file"] = b_out;
      }
      emit(g, j);
      return 0;
    }
    if (cmd_act->parsed()) {
      ResolvedModule rm = resolve_module(act_ref, g);
      VecQ x(rm.ctx->algebra().dim());
      if (act_x < 0 || static_cast<std::size_t>(act_x) >= x.size())
        throw Error(errc::PRECONDITION, "basis index out of range");
      x[act_x] = Rational(1);
      VecQ v = parse_rational_list(act_vec);
      json j;
      j["result"] = io::to_json(act(rm.module, x, act_r, v));
      emit(g, j);
      return 0;
    }
    if (cmd_hom->parsed()) {
      auto [m1, m2] = resolve_pair(hom_m1, hom_m2, g);
      json j;
      j["dim"] = hom_lie_only ? hom_space(m1.module.rho(), m2.module.rho()).dim()
                              : hom_module_space(m1.module, m2.module).dim();
      emit(g, j);
      return 0;
    }
    if (cmd_iso->parsed()) {
      auto [m1, m2] = resolve_pair(iso_m1, iso_m2, g);
      IsoResult res = find_isomorphism(m1.module, m2.module, iso_seed);
      json j;
      j["found"] = res.intertwiner.has_value();
      j["proven_nonisomorphic"] = res.proven_nonisomorphic;
      if (res.intertwiner) j["matrix"] = io::to_json(*res.intertwiner);
      emit(g, j);
      return 0;
    }
    if (cmd_ann->parsed()) {
      ResolvedModule rm = resolve_module(ann_ref, g);
      std::vector<Rational> roots = parse_rational_list(ann_roots);
      const int R = ann_R > 0 ? ann_R : static_cast<int>(roots.size());
      json j;
      j["annihilates"] = annihilator_poly_test(rm.module, roots, R);
      emit(g, j);
      return 0;
    }
    if (cmd_high->parsed()) {
      ResolvedModule rm = resolve_module(high_ref, g);
      auto vectors = highest_vectors(rm.module);
      json j;
      j["count"] = vectors.size();
      json vs = json::array();
      for (const auto& v : vectors) vs.push_back(io::to_json(v));
      j["vectors"] = std::move(vs);
      emit(g, j);
      return 0;
    }
    if (cmd_ext->parsed()) {
      auto [m1, m2] = resolve_pair(ext_m1, ext_m2, g);
      ExtResult res = ext1(m1.module, m2.module, ext_R, ext_S);
      json j;
      j["dimE"] = res.e_space.dim();
      j["dimE0"] = res.e0_space.dim();
      j["ext1"] = res.ext_dim;
      j["verified_to"] = res.verified_to;
      j["stabilized"] = res.stabilized;
      emit(g, j);
      return 0;
    }
    if (cmd_extirr->parsed()) {
      auto [v1, v2] = resolve_pair(ei_v1, ei_v2, g);
      std::vector<Rational> points = parse_rational_list(ei_points);
      json per_point = json::array();
      std::size_t total = 0;
      Rep ad = adjoint_rep(v1.ctx->algebra_ptr());
      PairModule target = tensor_module(dual_module(v1.module), v2.module, ei_R);
      for (const Rational& a : points) {
        const std::size_t dim =
            hom_module_space(evaluation_module(v1.ctx, ad, a), target).dim();
        total += dim;
        json p;
        p["point"] = a.str();
        p["dim"] = dim;
        per_point.push_back(std::move(p));
      }
      json j;
      j["ext1"] = total;
      j["per_point"] = std::move(per_point);
      emit(g, j);
      return 0;
    }
  } catch (const Error& e) {
    emit(g, error_report(e));
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    json j;
    j["error"] = "INTERNAL";
    j["detail"] = e.what();
    emit(g, j);
    return 2;
  }
  return 2;
}
