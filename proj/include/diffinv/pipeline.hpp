#pragma once

// End-to-end reproduction: every certificate for the standard example, collected
// into a JSON report. The report is deterministic apart from the "timings"
// object, which is excluded from the digest.

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "diffinv/error.hpp"
#include "diffinv/fixtures.hpp"
#include "diffinv/invariants.hpp"
#include "diffinv/modstruct.hpp"
#include "diffinv/series.hpp"

namespace diffinv {

inline constexpr const char* kEngineVersion = "1.0.0";
inline constexpr int kSchemaVersion = 1;

using Json = nlohmann::ordered_json;

struct PipelineOptions {
  int max_degree = 20;
  bool timings = true;
};

struct PipelineResult {
  Json report;
  bool pass = false;
  std::string first_failure;  ///< name of the first failing stage, empty on success
};

inline std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) throw ConsistencyError("digest failed");
  std::string hex;
  char buf[3];
  for (unsigned int k = 0; k < len; ++k) {
    std::snprintf(buf, sizeof buf, "%02x", md[k]);
    hex += buf;
  }
  return hex;
}

namespace detail {

class StageRunner {
 public:
  /// fn fills the stage object and returns whether its certificate holds.
  void run(const std::string& name, const std::function<bool(Json&)>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    Json s = Json::object();
    s["name"] = name;
    s["status"] = "fail";
    bool ok = false;
    try {
      ok = fn(s);
    } catch (const Error& e) {
      s["error"] = e.what();
    }
    s["status"] = ok ? "pass" : "fail";
    if (!ok && first_failure.empty()) first_failure = name;
    stages.push_back(std::move(s));
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    timings[name] = std::round(ms * 1000.0) / 1000.0;
  }

  Json stages = Json::array();
  Json timings = Json::object();
  std::string first_failure;
};

inline Json dims_json(const std::vector<std::size_t>& v) { return Json(v); }

inline std::vector<std::size_t> truncated_expansion(const RationalSeries& r, int d) {
  std::vector<std::size_t> out;
  for (long long c : r.expand(static_cast<std::size_t>(d))) out.push_back(static_cast<std::size_t>(c < 0 ? 0 : c));
  return out;
}

inline Json strings(const std::vector<GCElement>& v) {
  Json a = Json::array();
  for (const auto& f : v) a.push_back(to_string(f));
  return a;
}

inline std::vector<int> truncate_degrees(const std::vector<int>& v, int d) {
  std::vector<int> out;
  for (int x : v)
    if (x <= d) out.push_back(x);
  return out;
}

/// Generation plus freeness triangle for named generators of one family.
inline bool family_certificate(Json& s, const Fixture& f, const InvariantContext& ctx, int ydeg,
                               const std::vector<std::string>& names, int d) {
  const auto gens = f.elements(names);
  const GenerationResult gen = generation_check(gens, *f.hsop, ctx, ydeg, d);
  const FreenessCertificate tri = freeness_triangle(gens, *f.hsop, ctx, ydeg, d);
  s["generators"] = names;
  s["numerator"] = tri.series.numerator().to_string();
  s["series"] = tri.series.to_string();
  s["fixed_dims"] = tri.fixed_dims;
  s["span_dims"] = tri.span_dims;
  s["generation"] = gen.ok ? "pass" : "fail";
  if (!gen.ok) {
    s["failure"] = gen.failure ? gen.failure->to_string() : "";
    s["detail"] = gen.detail;
  }
  s["freeness_triangle"] = tri.ok ? "pass" : "fail";
  return gen.ok && tri.ok;
}

inline std::string reference_string(const ReferenceRelation& rel, const HsopSubalgebra& hsop) {
  std::string s;
  for (const auto& t : rel.right) {
    s += t.coefficient < 0 ? "-" : (s.empty() ? "" : "+");
    const long long mag = t.coefficient < 0 ? -t.coefficient : t.coefficient;
    if (mag != 1) s += std::to_string(mag) + "*";
    const std::string a = hsop.monomial_name(t.a_exponents);
    if (a != "1") s += a + "*";
    s += t.generator;
  }
  return s;
}

}  // namespace detail

inline PipelineResult run_reproduce(const Fixture& f, const PipelineOptions& opt = {}) {
  if (opt.max_degree < 0) throw DomainError("max degree must be non-negative");
  const int d = opt.max_degree;
  const auto& ex = f.expect;
  const std::uint32_t p = f.p;
  detail::StageRunner run;

  run.run("group_closure", [&](Json& s) {
    const auto kernel = f.rho.kernel();
    const auto image = f.rho.image_group();
    s["group_order"] = f.g->order();
    s["image_order"] = image->order();
    Json k = Json::array();
    for (auto e : kernel) k.push_back(f.g->element(e).to_string());
    s["kernel"] = k;
    s["rho_t"] = f.rho.image_of(f.t).to_string();
    s["rho_i"] = f.rho.image_of(f.i).to_string();
    s["subgroup_order"] = f.h->order();
    s["subgroup_image_order"] = f.hbar->order();
    bool ok = image->order() * kernel.size() == f.g->order();
    if (ex) {
      const bool minus_identity = f.rho.image_of(f.i * f.i).is_identity() && f.g->contains(f.i * f.i);
      ok = ok && f.g->order() == ex->group_order && image->order() == ex->image_order && kernel.size() == ex->kernel_order &&
           minus_identity;
    }
    return ok;
  });

  run.run("module_iso", [&](Json& s) {
    // phi(x_s) = t^(s-1) (x) w is the identity in the bases x_s and t_c (x) w
    const ModuleIsoResult r = verify_module_iso(f.rho, *f.h, f.chi, f.reps, FpMatrix::identity(3, p));
    s["representatives"] = Json::array({"e", "t", "t^2"});
    if (!r.ok) s["detail"] = r.detail;
    return r.ok;
  });

  run.run("invariant_dims", [&](Json& s) {
    Json g = Json::object();
    for (int y = 0; y <= 3; ++y) g["ydeg" + std::to_string(y)] = fixed_dims(*f.g_ctx, y, d);
    s["G"] = g;
    s["H_chi"] = fixed_dims(*f.h_chi_ctx, 0, d);
    s["H"] = fixed_dims(*f.h_ctx, 0, d);
    std::vector<long long> sg;
    for (auto v : fixed_dims(*f.g_ctx, 0, d)) sg.push_back(static_cast<long long>(v));
    const auto rec = hilbert_from_dims(sg, {2, 3, 4});
    s["hilbert_G"] = rec ? Json(rec->to_string()) : Json(nullptr);
    if (!ex) return true;
    const RationalSeries reference(IntPolynomial{1, 0, 0, 0, 0, 0, 1}, IntPolynomial::hsop_denominator({2, 3, 4}));
    s["expected_G"] = reference.to_string();
    return detail::truncated_expansion(reference, d) == fixed_dims(*f.g_ctx, 0, d);
  });

  run.run("molien", [&](Json& s) {
    const LinearCharacter chi_bar = f.chi.descend(f.rho_h, f.hbar);
    const RationalSeries m_chi = molien(*f.hbar, chi_bar);
    const RationalSeries m_triv = molien(*f.hbar, LinearCharacter::trivial(f.hbar));
    s["group"] = "Hbar";
    s["chi"] = m_chi.to_string();
    s["chi_reduced"] = m_chi.reduced().to_string();
    s["trivial"] = m_triv.to_string();
    s["trivial_reduced"] = m_triv.reduced().to_string();
    bool ok = detail::truncated_expansion(m_chi, d) == fixed_dims(*f.h_chi_ctx, 0, d) &&
              detail::truncated_expansion(m_triv, d) == fixed_dims(*f.h_ctx, 0, d);
    s["matches_dims"] = ok;
    try {
      const HsopNumerator hn = rewrite_over_hsop(m_chi, f.hsop->degrees());
      s["chi_over_hsop"] = hn.numerator.to_string();
      s["chi_over_hsop_nonnegative"] = hn.nonnegative;
      if (ex) ok = ok && hn.nonnegative && hn.numerator == IntPolynomial(ex->molien_chi_over_hsop);
    } catch (const NotFreeError& e) {
      s["chi_over_hsop"] = nullptr;
      ok = false;
    }
    if (ex) {
      const RationalSeries reference(IntPolynomial{0, 1, 1}, IntPolynomial::hsop_denominator({2, 2, 2}));
      ok = ok && m_chi == reference && m_chi.to_string() == ex->molien_chi;
    }
    return ok;
  });

  run.run("hsop", [&](Json& s) {
    const bool a = hsop_check(f.hsop->generators(), 3);
    const bool invariant = std::all_of(f.hsop->generators().begin(), f.hsop->generators().end(),
                                       [&](const GCElement& g) { return f.g_ctx->is_fixed(g); });
    const bool x = hsop_check({parse_element("x1^2", 3, p), parse_element("x2^2", 3, p), parse_element("x3^2", 3, p)}, 3);
    s["a1_a2_a3"] = a;
    s["a_invariant"] = invariant;
    s["x1sq_x2sq_x3sq"] = x;
    return a && invariant && x;
  });

  run.run("module_generators", [&](Json& s) {
    bool ok = true;
    const GeneratorReport sg = find_module_generators(*f.hsop, *f.g_ctx, 0, d, "S^G");
    const GeneratorReport sh = find_module_generators(*f.hsop, *f.h_chi_ctx, 0, d, "S^H_chi");
    Json found = Json::object();
    for (const auto* r : {&sg, &sh}) {
      Json o = Json::object();
      o["degrees"] = r->degrees();
      o["generators"] = detail::strings(r->elements());
      const FreenessCertificate tri = freeness_triangle(r->elements(), *f.hsop, r == &sg ? *f.g_ctx : *f.h_chi_ctx, 0, d);
      o["freeness_triangle"] = tri.ok ? "pass" : "fail";
      ok = ok && tri.ok;
      found[r->context] = o;
    }
    s["found"] = found;
    if (!ex) return ok;
    ok = ok && sg.degrees() == detail::truncate_degrees(ex->invariant_generator_degrees, d) &&
         sh.degrees() == detail::truncate_degrees(ex->relative_generator_degrees, d);

    if (d >= 6) {
      // b together with the A-span of 1 fills degree 6, and is not already in it
      const BidegreeBasis& bb = f.g_ctx->coordinates({6, 0});
      const EchelonSpan ones = a_span({GCElement::constant(1, 3, p)}, *f.hsop, bb);
      const bool b_new = !in_span(f["b"], ones, bb);
      DenseMatrix m = ones.echelon;
      m.append_row(bb.coordinates(f["b"]));
      const bool b_spans = b_new && rank_of(m) == f.g_ctx->dimension({6, 0});
      s["b_spans_degree6_complement"] = b_spans;
      ok = ok && b_spans;
    }

    Json fam = Json::array();
    struct Family {
      const char* name;
      const InvariantContext* ctx;
      int ydeg;
      std::vector<std::string> gens;
    };
    const std::vector<Family> families{
        {"S^H_chi", f.h_chi_ctx.get(), 0, f.relative_names},
        {"Lambda0", f.g_ctx.get(), 0, {"1", "b"}},
        {"Lambda1", f.g_ctx.get(), 1, {"c1", "c2", "c3", "c4", "c5", "c6"}},
        {"Lambda2", f.g_ctx.get(), 2, {"d1", "d2", "d3", "d4", "d5", "d6"}},
        {"Lambda3", f.g_ctx.get(), 3, {"w", "bw"}},
    };
    Fixture local = f;  // "1" is only needed here
    local.named.emplace("1", GCElement::constant(1, 3, p));
    for (const auto& fa : families) {
      Json o = Json::object();
      o["family"] = fa.name;
      o["ydeg"] = fa.ydeg;
      ok = detail::family_certificate(o, local, *fa.ctx, fa.ydeg, fa.gens, d) && ok;
      fam.push_back(o);
    }
    s["families"] = fam;

    // each relative generator is needed: dropping it loses generation at its own degree
    Json drops = Json::array();
    for (std::size_t k = 0; k < f.relative_names.size(); ++k) {
      const int deg = f[f.relative_names[k]].bidegree()->xdeg;
      if (deg > d) continue;
      std::vector<GCElement> rest;
      for (std::size_t j = 0; j < f.relative_names.size(); ++j)
        if (j != k) rest.push_back(f[f.relative_names[j]]);
      const GenerationResult g = generation_check(rest, *f.hsop, *f.h_chi_ctx, 0, d);
      Json o = Json::object();
      o["dropped"] = to_string(f[f.relative_names[k]]);
      o["fails"] = !g.ok;
      o["failure"] = g.failure ? Json(g.failure->to_string()) : Json(nullptr);
      o["witness"] = g.witness ? Json(to_string(*g.witness)) : Json(nullptr);
      ok = ok && !g.ok && g.failure && g.failure->xdeg == deg && g.witness;
      drops.push_back(o);
    }
    s["drop_one"] = drops;
    return ok;
  });

  run.run("theta", [&](Json& s) {
    const ThetaIsoResult iso = theta_iso_check(*f.g_ctx, *f.h_chi_ctx, *f.h, f.reps, d);
    s["iso"] = iso.ok ? "pass" : "fail";
    if (!iso.ok) s["detail"] = iso.detail;
    bool ok = iso.ok;
    if (ex) {
      Json vals = Json::array();
      for (const auto& [arg, idx, name] : ex->theta_values) {
        const GCElement v = theta(f[arg], idx, f.rho, f.reps, f.h_chi_ctx.get());
        Json o = Json::object();
        o["argument"] = to_string(f[arg]);
        o["index"] = idx;
        o["value"] = to_string(v);
        o["expected"] = name;
        o["match"] = v == f[name];
        ok = ok && v == f[name];
        vals.push_back(o);
      }
      s["values"] = vals;
    }
    return ok;
  });

  run.run("relations", [&](Json& s) {
    if (!ex) {
      s["skipped"] = "no reference relations for an overridden fixture";
      return true;
    }
    const std::vector<std::string> dnames{"d1", "d2", "d3", "d4", "d5", "d6"};
    const auto dgens = f.elements(dnames);
    bool ok = true;
    Json recs = Json::array();
    for (const auto& rel : ex->relations) {
      const RelationRecord r = relation_extract(f[rel.first] * f[rel.second], dgens, *f.hsop, rel.left);
      Json o = Json::object();
      o["left"] = rel.left;
      o["derived"] = to_string(r, *f.hsop, dnames);
      o["reference"] = detail::reference_string(rel, *f.hsop);
      o["in_span"] = r.in_span;
      o["unique"] = r.unique;
      o["residual_zero"] = r.residual_zero;
      GCElement ref(3, p);
      for (const auto& t : rel.right) {
        GCElement a = GCElement::constant(t.coefficient, 3, p);
        for (std::size_t k = 0; k < t.a_exponents.size(); ++k) a = a * power(f.hsop->generators()[k], t.a_exponents[k]);
        ref += a * f[t.generator];
      }
      const bool match = ref == f[rel.first] * f[rel.second];
      o["matches_reference"] = match;
      if (!match) o["erratum"] = {{"reference", o["reference"]}, {"derived", o["derived"]}};
      ok = ok && r.in_span && r.unique && r.residual_zero;
      recs.push_back(o);
    }
    s["records"] = recs;
    const bool c1sq = (f["c1"] * f["c1"]).is_zero();
    s["c1_squared_zero"] = c1sq;
    Json obsolete = Json::object();
    const auto minimal = f.elements(f.minimal_names);
    for (const char* n : {"d4", "d5", "d6"}) {
      const bool dec = is_obsolete(*f.g_ctx, minimal, f[n]);
      obsolete[n] = dec;
      ok = ok && dec;
    }
    s["obsolete"] = obsolete;
    return ok && c1sq;
  });

  run.run("minimal_generators", [&](Json& s) {
    const MinimalGenerators mg = minimal_algebra_generators(*f.g_ctx, d, 3);
    s["total"] = mg.total();
    const auto minimal = f.elements(f.minimal_names);
    bool named_ok = true;
    Json prof = Json::array();
    for (const auto& e : mg.entries) {
      Json o = Json::object();
      o["bidegree"] = e.bidegree.to_string();
      o["count"] = e.representatives.size();
      o["representatives"] = detail::strings(e.representatives);
      if (ex) {
        std::vector<std::string> names;
        std::vector<GCElement> cands;
        for (std::size_t k = 0; k < f.minimal_names.size(); ++k)
          if (minimal[k].bidegree() == e.bidegree) {
            names.push_back(f.minimal_names[k]);
            cands.push_back(minimal[k]);
          }
        const bool spans = spans_complement(*f.g_ctx, minimal, e.bidegree, cands);
        o["named"] = names;
        o["named_span_complement"] = spans;
        named_ok = named_ok && spans;
      }
      prof.push_back(o);
    }
    s["profile"] = prof;
    if (!ex) return true;
    std::vector<std::pair<Bidegree, std::size_t>> expected;
    std::size_t expected_total = 0;
    for (const auto& [bd, n] : ex->profile)
      if (bd.xdeg <= d) {
        expected.emplace_back(bd, n);
        expected_total += n;
      }
    std::vector<std::pair<Bidegree, std::size_t>> got;
    for (const auto& e : mg.entries) got.emplace_back(e.bidegree, e.representatives.size());
    std::sort(expected.begin(), expected.end());
    std::sort(got.begin(), got.end());
    s["expected_total"] = expected_total;
    return named_ok && got == expected && mg.total() == expected_total;
  });

  PipelineResult res;
  Json stable = Json::object();
  stable["schema"] = kSchemaVersion;
  stable["engine_version"] = kEngineVersion;
  stable["parameters"] = {{"max_degree", d},
                          {"characteristic", p},
                          {"fixture", f.expect ? "standard" : "config"}};
  stable["stages"] = run.stages;
  res.pass = run.first_failure.empty();
  res.first_failure = run.first_failure;
  stable["overall"] = res.pass ? "pass" : "fail";
  if (!res.pass) stable["first_failure"] = run.first_failure;
  res.report = stable;
  res.report["digest"] = sha256_hex(stable.dump());
  if (opt.timings) res.report["timings_ms"] = run.timings;
  return res;
}

/// One line per stage plus the minimal-generator profile.
inline std::string render_text(const Json& report) {
  std::string out;
  out += "engine " + report["engine_version"].get<std::string>() + ", schema " + std::to_string(report["schema"].get<int>()) +
         ", max degree " + std::to_string(report["parameters"]["max_degree"].get<int>()) + "\n";
  for (const auto& s : report["stages"]) {
    std::string line = s["status"] == "pass" ? "[PASS] " : "[FAIL] ";
    line += s["name"].get<std::string>();
    if (s.contains("error")) line += ": " + s["error"].get<std::string>();
    out += line + "\n";
    if (s["name"] == "molien") out += "  Hbar chi: " + s["chi"].get<std::string>() + "\n";
    if (s["name"] == "invariant_dims" && !s["hilbert_G"].is_null()) out += "  S^G: " + s["hilbert_G"].get<std::string>() + "\n";
    if (s["name"] == "relations" && s.contains("records"))
      for (const auto& r : s["records"])
        out += "  " + r["left"].get<std::string>() + " = " + r["derived"].get<std::string>() + "\n";
    if (s["name"] == "minimal_generators") {
      out += "  total " + std::to_string(s["total"].get<std::size_t>()) + ":";
      for (const auto& e : s["profile"]) out += " " + e["bidegree"].get<std::string>() + "x" + std::to_string(e["count"].get<std::size_t>());
      out += "\n";
    }
  }
  out += "overall: " + report["overall"].get<std::string>() + "\n";
  out += "digest: " + report["digest"].get<std::string>() + "\n";
  return out;
}

}  // namespace diffinv
