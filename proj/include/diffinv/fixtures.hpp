#pragma once

// The standard example: G = <t, i> in SL2(F_3) acting by conjugation on the
// trace-zero 2x2 matrices, the quaternion subgroup H with the character chi,
// parameters a1, a2, a3 and the named invariants used in the certificates.
// Matrices and chi may be overridden from a key=value file; expectations tied
// to the standard example are dropped when anything is overridden.

#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "diffinv/error.hpp"
#include "diffinv/fp_matrix.hpp"
#include "diffinv/gcalg.hpp"
#include "diffinv/grouprep.hpp"
#include "diffinv/invariants.hpp"
#include "diffinv/modstruct.hpp"

namespace diffinv {

struct FixtureInput {
  std::uint32_t p = 3;
  std::vector<long long> t{1, 1, 0, 1};
  std::vector<long long> i{0, 1, -1, 0};
  std::vector<std::vector<long long>> basis{{0, 1, -1, 0}, {-1, -1, -1, 1}, {1, -1, -1, -1}};
  long long chi_i = 1;
  long long chi_j = -1;
  bool overridden = false;  ///< some value differs from the standard example

  bool operator==(const FixtureInput&) const = default;
};

/// One side of a reference relation: coeff * a^alpha * d_k.
struct ReferenceTerm {
  long long coefficient;
  std::vector<unsigned> a_exponents;
  std::string generator;
};

struct ReferenceRelation {
  std::string left;   ///< "c1*c2"
  std::string first;  ///< "c1"
  std::string second; ///< "c2"
  std::vector<ReferenceTerm> right;
};

/// Values the standard example must reproduce. Absent for overridden fixtures.
struct Expectations {
  std::size_t group_order = 24;
  std::size_t image_order = 12;
  std::size_t kernel_order = 2;
  std::string molien_chi = "(t+t^2)/(1-t^2)^3";
  std::vector<long long> molien_chi_over_hsop{0, 1, 1, 2, 1, 1};  ///< t+t^2+2t^3+t^4+t^5
  std::vector<int> invariant_generator_degrees{0, 6};
  std::vector<int> relative_generator_degrees{1, 2, 3, 3, 4, 5};
  std::size_t minimal_total = 14;
  std::vector<std::pair<Bidegree, std::size_t>> profile{{{0, 3}, 1}, {{1, 1}, 1}, {{1, 2}, 1}, {{2, 0}, 1}, {{2, 1}, 1},
                                                         {{2, 2}, 1}, {{3, 0}, 1}, {{3, 1}, 2}, {{3, 2}, 1}, {{4, 0}, 1},
                                                         {{4, 1}, 1}, {{5, 1}, 1}, {{6, 0}, 1}};
  /// (argument, theta index, expected name)
  std::vector<std::tuple<std::string, int, std::string>> theta_values{
      {"r1", 1, "c1"}, {"r2", 1, "c2"}, {"r1", 2, "d1"}, {"r2", 2, "d2"}};
  std::vector<ReferenceRelation> relations{
      {"c1*c2", "c1", "c2", {{-1, {0, 0, 0}, "d4"}, {-1, {1, 0, 0}, "d1"}, {1, {0, 0, 0}, "d3"}}},
      {"c1*c3", "c1", "c3", {{1, {1, 0, 0}, "d2"}, {1, {0, 0, 0}, "d5"}, {-1, {0, 1, 0}, "d1"}}},
      {"c2*c3", "c2", "c3",
       {{-1, {0, 0, 0}, "d6"}, {1, {1, 0, 0}, "d4"}, {-1, {1, 0, 0}, "d3"}, {1, {0, 1, 0}, "d2"}, {-1, {0, 0, 1}, "d1"},
        {-1, {2, 0, 0}, "d1"}}},
  };
};

struct Fixture {
  FixtureInput input;
  std::uint32_t p;
  FpMatrix t, i, j, k;
  GroupPtr g, h;
  Representation rho;     ///< G on V by conjugation, images in the column convention
  Representation rho_h;   ///< restriction to H
  LinearCharacter chi;    ///< on H
  GroupPtr hbar;          ///< image of H
  std::vector<std::size_t> reps;  ///< {e, t, t^2} as indices into G
  std::shared_ptr<InvariantContext> g_ctx, h_chi_ctx, h_ctx;
  std::shared_ptr<HsopSubalgebra> hsop;
  std::map<std::string, GCElement> named;
  std::vector<std::string> relative_names{"r1", "r2", "r3", "r4", "r5", "r6"};
  std::vector<std::string> minimal_names{"a1", "a2", "a3", "b",  "c1", "c2", "c3", "c4",
                                         "c5", "c6", "d1", "d2", "d3", "w"};
  std::optional<Expectations> expect;

  unsigned rank() const { return static_cast<unsigned>(rho.dimension()); }
  const GCElement& operator[](const std::string& name) const {
    auto it = named.find(name);
    if (it == named.end()) throw DomainError("no named element " + name);
    return it->second;
  }
  std::vector<GCElement> elements(const std::vector<std::string>& names) const {
    std::vector<GCElement> v;
    for (const auto& n : names) v.push_back((*this)[n]);
    return v;
  }
};

inline Fixture build_fixture(const FixtureInput& in = {}) {
  const std::uint32_t p = in.p;
  auto square = [p](const std::vector<long long>& e, const char* what) {
    if (e.size() != 4) throw DomainError(std::string(what) + " must have 4 entries");
    return FpMatrix::square(e, p);
  };
  const FpMatrix t = square(in.t, "t");
  const FpMatrix i = square(in.i, "i");
  const FpMatrix j = t.inverse() * i * t;
  const FpMatrix k = t * i * t.inverse();
  GroupPtr g = make_group({t, i});
  std::vector<FpMatrix> basis;
  for (const auto& v : in.basis) basis.push_back(square(v, "basis matrix"));
  Representation rho = conjugation_rep(g, basis);
  GroupPtr h = make_group({i, j});
  Representation rho_h = rho.restrict_to(h);
  LinearCharacter chi = LinearCharacter::from_generator_values(h, {in.chi_i, in.chi_j});
  GroupPtr hbar = rho_h.image_group();
  std::vector<std::size_t> reps{g->identity(), g->index(t), g->index(t * t)};

  Fixture f{in, p, t, i, j, k, g, h, rho, rho_h, chi, hbar, reps, nullptr, nullptr, nullptr, nullptr, {}};
  f.g_ctx = std::make_shared<InvariantContext>(rho);
  f.h_chi_ctx = std::make_shared<InvariantContext>(rho_h, chi);
  f.h_ctx = std::make_shared<InvariantContext>(rho_h);
  const unsigned n = f.rank();
  if (n != 3) throw DomainError("the standard example needs a rank-3 representation");

  const std::vector<std::pair<std::string, std::string>> defs{
      {"a1", "x1^2+x2^2+x3^2"},
      {"a2", "x1*x2*x3"},
      {"a3", "x1^4+x2^4+x3^4"},
      {"b", "x1^4*x2^2+x1^2*x3^4+x2^4*x3^2"},
      {"r1", "x1"},
      {"r2", "x2*x3"},
      {"r3", "x1^3"},
      {"r4", "x1*x2^2"},
      {"r5", "x2^3*x3"},
      {"r6", "x1^3*x2^2"},
      {"c1", "x1*y1+x2*y2+x3*y3"},
      {"c2", "x2*x3*y1+x3*x1*y2+x1*x2*y3"},
      {"c3", "x1^3*y1+x2^3*y2+x3^3*y3"},
      {"c4", "x1*x2^2*y1+x2*x3^2*y2+x3*x1^2*y3"},
      {"c5", "x2^3*x3*y1+x3^3*x1*y2+x1^3*x2*y3"},
      {"c6", "x1^3*x2^2*y1+x2^3*x3^2*y2+x3^3*x1^2*y3"},
      {"d1", "x1*y2*y3+x2*y3*y1+x3*y1*y2"},
      {"d2", "x2*x3*y2*y3+x3*x1*y3*y1+x1*x2*y1*y2"},
      {"d3", "x1^3*y2*y3+x2^3*y3*y1+x3^3*y1*y2"},
      {"d4", "x1*x2^2*y2*y3+x2*x3^2*y3*y1+x3*x1^2*y1*y2"},
      {"d5", "x2^3*x3*y2*y3+x3^3*x1*y3*y1+x1^3*x2*y1*y2"},
      {"d6", "x1^3*x2^2*y2*y3+x2^3*x3^2*y3*y1+x3^3*x1^2*y1*y2"},
      {"w", "y1*y2*y3"},
  };
  for (const auto& [name, text] : defs) f.named.emplace(name, parse_element(text, n, p));
  f.named.emplace("bw", f["b"] * f["w"]);
  f.hsop = std::make_shared<HsopSubalgebra>(f.elements({"a1", "a2", "a3"}), std::vector<std::string>{"a1", "a2", "a3"});
  if (!in.overridden) f.expect = Expectations{};
  return f;
}

/// key = value lines; '#' starts a comment. Matrices are row-major, comma or space separated.
/// Keys: p, t, i, v1, v2, v3, chi_i, chi_j.
inline FixtureInput parse_fixture_config(std::istream& is) {
  FixtureInput in;
  std::string line;
  int lineno = 0;
  auto numbers = [&](const std::string& v) {
    std::string s = v;
    for (char& c : s)
      if (c == ',' || c == '[' || c == ']' || c == ';') c = ' ';
    std::istringstream ss(s);
    std::vector<long long> out;
    long long x = 0;
    while (ss >> x) out.push_back(x);
    if (!ss.eof()) throw ParseError("line " + std::to_string(lineno) + ": expected integers");
    return out;
  };
  while (std::getline(is, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    if (trim(line).empty()) continue;
    if (eq == std::string::npos) throw ParseError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const auto vals = numbers(trim(line.substr(eq + 1)));
    auto scalar = [&]() {
      if (vals.size() != 1) throw ParseError("line " + std::to_string(lineno) + ": " + key + " takes one integer");
      return vals.front();
    };
    if (key == "p") {
      const long long v = scalar();
      if (v < 2 || v > 251 || !is_prime(static_cast<std::uint64_t>(v))) throw ParseError("p must be a prime below 256");
      in.p = static_cast<std::uint32_t>(v);
    } else if (key == "t") {
      in.t = vals;
    } else if (key == "i") {
      in.i = vals;
    } else if (key == "v1" || key == "v2" || key == "v3") {
      in.basis[static_cast<std::size_t>(key[1] - '1')] = vals;
    } else if (key == "chi_i") {
      in.chi_i = scalar();
    } else if (key == "chi_j") {
      in.chi_j = scalar();
    } else {
      throw ParseError("line " + std::to_string(lineno) + ": unknown key " + key);
    }
  }
  in.overridden = !(in == FixtureInput{});
  return in;
}

inline FixtureInput load_fixture_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw DomainError("cannot open config file " + path);
  return parse_fixture_config(is);
}

}  // namespace diffinv
