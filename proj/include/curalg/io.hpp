#pragma once

#include <json.hpp>

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "curalg/curmod.hpp"
#include "curalg/error.hpp"
#include "curalg/freelie.hpp"
#include "curalg/liealg.hpp"

namespace curalg::io {

// insertion-ordered JSON keeps report field order deterministic
using json = nlohmann::ordered_json;

inline json to_json(const Rational& r) { return r.str(); }

inline Rational rational_from(const json& j) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  throw Error(errc::PARSE_ERROR, "expected a rational as \"p/q\" text");
}

inline json to_json(const VecQ& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(x.str());
  return a;
}

inline VecQ vec_from(const json& j) {
  if (!j.is_array()) throw Error(errc::PARSE_ERROR, "expected an array of rationals");
  VecQ v;
  for (const auto& x : j) v.push_back(rational_from(x));
  return v;
}

inline json to_json(const MatrixQ& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(to_json(m.row(i)));
  return rows;
}

inline MatrixQ matrix_from(const json& j) {
  if (!j.is_array() || j.empty())
    throw Error(errc::PARSE_ERROR, "expected a non-empty array of rows");
  std::vector<VecQ> rows;
  for (const auto& r : j) rows.push_back(vec_from(r));
  return MatrixQ::from_rows(rows);
}

/// Structure-constant file format:
/// {"dim": n, "basis": [...], "brackets": [[i, j, [[k, "p/q"], ...]], ...],
///  "triangular": {...}} — omitted pairs mean zero; antisymmetric completion
/// is applied on load.
inline json algebra_to_json(const LieAlgebra& L) {
  json j;
  j["dim"] = L.dim();
  j["basis"] = L.basis_names();
  json brackets = json::array();
  for (std::size_t i = 0; i < L.dim(); ++i)
    for (std::size_t k = i + 1; k < L.dim(); ++k) {
      const auto& br = L.bracket_sparse(i, k);
      if (br.empty()) continue;
      json terms = json::array();
      for (const auto& [t, c] : br) terms.push_back(json::array({t, c.str()}));
      brackets.push_back(json::array({i, k, terms}));
    }
  j["brackets"] = std::move(brackets);
  if (L.triangular()) {
    const auto& tri = *L.triangular();
    json t;
    t["nplus"] = tri.nplus;
    t["h"] = tri.h;
    t["nminus"] = tri.nminus;
    t["x_theta_plus"] = to_json(tri.x_theta_plus);
    t["x_theta_minus"] = to_json(tri.x_theta_minus);
    t["theta"] = to_json(tri.theta);
    j["triangular"] = std::move(t);
  }
  return j;
}

inline AlgebraPtr algebra_from_json(const json& j) {
  if (!j.contains("dim") || !j.contains("basis") || !j.contains("brackets"))
    throw Error(errc::PARSE_ERROR, "algebra file needs dim, basis and brackets");
  const std::size_t dim = j.at("dim").get<std::size_t>();
  std::vector<std::string> names = j.at("basis").get<std::vector<std::string>>();
  std::vector<std::tuple<std::size_t, std::size_t, SparseBracket>> entries;
  for (const auto& e : j.at("brackets")) {
    if (!e.is_array() || e.size() != 3)
      throw Error(errc::PARSE_ERROR, "bracket entries are [i, j, [[k, c], ...]]");
    SparseBracket br;
    for (const auto& t : e.at(2))
      br.emplace_back(t.at(0).get<std::size_t>(), rational_from(t.at(1)));
    entries.emplace_back(e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>(), br);
  }
  std::optional<TriangularData> tri;
  if (j.contains("triangular")) {
    const auto& t = j.at("triangular");
    TriangularData td;
    td.nplus = t.at("nplus").get<std::vector<std::size_t>>();
    td.h = t.at("h").get<std::vector<std::size_t>>();
    td.nminus = t.at("nminus").get<std::vector<std::size_t>>();
    td.x_theta_plus = vec_from(t.at("x_theta_plus"));
    td.x_theta_minus = vec_from(t.at("x_theta_minus"));
    td.theta = vec_from(t.at("theta"));
    tri = std::move(td);
  }
  return make_algebra(dim, std::move(names), entries, std::move(tri));
}

inline json certificate_to_json(const Certificate& c) {
  json j;
  switch (c.kind) {
    case Certificate::Kind::ExactNilpotent:
      j["kind"] = "EXACT_NILPOTENT";
      j["N"] = c.bound;
      break;
    case Certificate::Kind::ExactByConstruction:
      j["kind"] = "EXACT_BY_CONSTRUCTION";
      j["tag"] = c.tag;
      if (c.eval_point) j["point"] = c.eval_point->str();
      break;
    case Certificate::Kind::Bounded:
      j["kind"] = "BOUNDED";
      j["R"] = c.bound;
      break;
  }
  return j;
}

inline Certificate certificate_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "EXACT_NILPOTENT") return Certificate::nilpotent(j.at("N").get<int>());
  if (kind == "EXACT_BY_CONSTRUCTION") {
    std::optional<Rational> pt;
    if (j.contains("point")) pt = rational_from(j.at("point"));
    return Certificate::construction(j.at("tag").get<std::string>(), pt);
  }
  if (kind == "BOUNDED") return Certificate::bounded(j.at("R").get<int>());
  throw Error(errc::PARSE_ERROR, "unknown certificate kind: " + kind);
}

/// Module file format: {"algebra": <builtin tag or path>, "dim": n,
/// "rho": [matrix per basis element], "eta": [...], "certificate": {...}}.
inline json module_to_json(const PairModule& m, const std::string& algebra_ref) {
  json j;
  j["algebra"] = algebra_ref;
  j["dim"] = m.dim();
  json rho = json::array();
  for (const auto& mt : m.rho().matrices) rho.push_back(to_json(mt));
  j["rho"] = std::move(rho);
  json eta = json::array();
  for (const auto& e : m.eta()) eta.push_back(to_json(e));
  j["eta"] = std::move(eta);
  j["certificate"] = certificate_to_json(m.certificate());
  return j;
}

/// Loads a module over an already-resolved context. (C1) and (C2) are
/// re-checked on load; the stated certificate is recorded as given.
inline PairModule module_from_json(const ContextPtr& ctx, const json& j) {
  const std::size_t n = j.at("dim").get<std::size_t>();
  std::vector<MatrixQ> rho_mats, eta;
  for (const auto& mj : j.at("rho")) rho_mats.push_back(matrix_from(mj));
  for (const auto& mj : j.at("eta")) eta.push_back(matrix_from(mj));
  if (rho_mats.size() != ctx->algebra().dim() || eta.size() != ctx->algebra().dim())
    throw Error(errc::PARSE_ERROR, "module file has the wrong number of matrices");
  for (const auto& mt : rho_mats)
    if (mt.rows() != n || mt.cols() != n)
      throw Error(errc::PARSE_ERROR, "module matrices must be dim x dim");
  Certificate cert = certificate_from_json(j.at("certificate"));
  Rep rho(ctx->algebra_ptr(), std::move(rho_mats));  // validates (C1)
  PairModule m(ctx, std::move(rho), std::move(eta), std::move(cert));
  // (C2) check
  const LieAlgebra& L = ctx->algebra();
  for (std::size_t i = 0; i < L.dim(); ++i)
    for (std::size_t k = 0; k < L.dim(); ++k) {
      MatrixQ want(n, n);
      for (const auto& [t, c] : L.bracket_sparse(i, k)) want += m.eta()[t] * c;
      if (want != MatrixQ::commutator(m.rho().matrices[i], m.eta()[k]))
        throw Error(errc::C2_FAILS, "module file violates equivariance",
                    {static_cast<long long>(i), static_cast<long long>(k)});
    }
  return m;
}

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(errc::PARSE_ERROR, "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(errc::PARSE_ERROR, std::string("bad JSON in ") + path + ": " + e.what());
  }
  return j;
}

inline void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(errc::PARSE_ERROR, "cannot write " + path);
  out << j.dump(2) << "\n";
}

/// Builtin algebra tags: sl2..sl5, so3..so6, so-split3..so-split6.
inline std::optional<AlgebraPtr> builtin_algebra(const std::string& tag) {
  auto parse_n = [](const std::string& s, std::size_t pos) -> std::optional<std::size_t> {
    if (pos >= s.size()) return std::nullopt;
    std::size_t n = 0;
    for (std::size_t i = pos; i < s.size(); ++i) {
      if (!isdigit(s[i])) return std::nullopt;
      n = n * 10 + (s[i] - '0');
    }
    return n;
  };
  if (tag.rfind("sl", 0) == 0) {
    if (auto n = parse_n(tag, 2); n && *n >= 2 && *n <= 5)
      return classical_algebra(ClassicalFamily::sl, *n);
  } else if (tag.rfind("so-split", 0) == 0) {
    if (auto n = parse_n(tag, 8); n && *n >= 3 && *n <= 6) return split_so_algebra(*n);
  } else if (tag.rfind("so", 0) == 0) {
    if (auto n = parse_n(tag, 2); n && *n >= 3 && *n <= 6)
      return classical_algebra(ClassicalFamily::so, *n);
  }
  return std::nullopt;
}

/// Resolves an algebra reference: builtin tag first, then a file path.
inline AlgebraPtr resolve_algebra(const std::string& ref) {
  if (auto builtin = builtin_algebra(ref)) return *builtin;
  return algebra_from_json(load_json_file(ref));
}

/// The defining (natural) representation of a builtin classical algebra.
inline Rep builtin_natural_rep(const AlgebraPtr& L, const std::string& tag) {
  auto n_of = [&](std::size_t pos) { return std::stoul(tag.substr(pos)); };
  if (tag.rfind("sl", 0) == 0) return Rep(L, detail::sl_basis(n_of(2)).mats);
  if (tag.rfind("so-split", 0) == 0) return Rep(L, detail::split_so_basis(n_of(8)).mats);
  if (tag.rfind("so", 0) == 0) return Rep(L, detail::so_basis(n_of(2)).mats);
  throw Error(errc::PARSE_ERROR, "no natural rep for " + tag);
}

struct BuiltinModule {
  ContextPtr ctx;
  PairModule module;
  std::string algebra_tag;
};

/// Builtin module tags:
///   builtin:trivial                  (needs an algebra from context)
///   builtin:<alg>-nat-eval:<a>       e.g. builtin:sl2-nat-eval:0
///   builtin:<alg>-ad-eval:<a>        e.g. builtin:sl2-ad-eval:1
inline std::optional<BuiltinModule> builtin_module(const std::string& tag,
                                                   const ContextPtr& fallback_ctx,
                                                   const std::string& fallback_tag,
                                                   const FreeLieOptions& opts) {
  if (tag.rfind("builtin:", 0) != 0) return std::nullopt;
  std::string body = tag.substr(8);
  if (body == "trivial") {
    ContextPtr ctx = fallback_ctx;
    std::string atag = fallback_tag;
    if (!ctx) {
      atag = "sl2";
      ctx = make_context(*builtin_algebra(atag), opts);
    }
    return BuiltinModule{ctx,
                         evaluation_module(ctx, trivial_rep(ctx->algebra_ptr()), Rational(0)),
                         atag};
  }
  const auto colon = body.rfind(':');
  if (colon == std::string::npos)
    throw Error(errc::PARSE_ERROR, "builtin module tags look like builtin:sl2-ad-eval:1");
  const Rational point = Rational::parse(body.substr(colon + 1));
  std::string head = body.substr(0, colon);
  std::string rep_kind;
  std::string alg_tag;
  for (const std::string& suffix : {std::string("-nat-eval"), std::string("-ad-eval")}) {
    if (head.size() > suffix.size() &&
        head.compare(head.size() - suffix.size(), suffix.size(), suffix) == 0) {
      alg_tag = head.substr(0, head.size() - suffix.size());
      rep_kind = suffix.substr(1, suffix.size() - 6);
    }
  }
  if (alg_tag.empty())
    throw Error(errc::PARSE_ERROR, "unknown builtin module tag: " + tag);
  ContextPtr ctx = fallback_ctx;
  if (!ctx || fallback_tag != alg_tag) {
    auto alg = builtin_algebra(alg_tag);
    if (!alg) throw Error(errc::PARSE_ERROR, "unknown builtin algebra: " + alg_tag);
    ctx = make_context(*alg, opts);
  }
  Rep rep = (rep_kind == "nat") ? builtin_natural_rep(ctx->algebra_ptr(), alg_tag)
                                : adjoint_rep(ctx->algebra_ptr());
  return BuiltinModule{ctx, evaluation_module(ctx, rep, point), alg_tag};
}

}  // namespace curalg::io
