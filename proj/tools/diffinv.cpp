// Command-line front end. Exit codes: 0 pass, 1 certificate failure, 2 usage error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "diffinv/fixtures.hpp"
#include "diffinv/pipeline.hpp"

namespace {

using namespace diffinv;

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct UsageError : Error {
  using Error::Error;
};

struct Family {
  const InvariantContext* ctx;
  GroupPtr molien_group;
  std::optional<LinearCharacter> molien_chi;
  std::string name;
};

/// G, H or Hbar with the trivial character or chi. Hbar acts through its own natural representation.
Family select_family(const Fixture& f, const std::string& group, const std::string& character,
                     std::optional<InvariantContext>& hbar_ctx) {
  if (character != "trivial" && character != "chi") throw UsageError("unknown character '" + character + "'");
  const bool chi = character == "chi";
  if (group == "G") {
    if (chi) throw UsageError("chi is defined on H only");
    return {f.g_ctx.get(), f.rho.image_group(), std::nullopt, "G"};
  }
  if (group == "H") {
    return {chi ? f.h_chi_ctx.get() : f.h_ctx.get(), f.hbar, chi ? std::optional(f.chi.descend(f.rho_h, f.hbar)) : std::nullopt, "H"};
  }
  if (group == "Hbar") {
    const Representation nat = Representation::natural(f.hbar);
    std::optional<LinearCharacter> c;
    if (chi) c = f.chi.descend(f.rho_h, f.hbar);
    hbar_ctx.emplace(nat, c);
    return {&*hbar_ctx, f.hbar, c, "Hbar"};
  }
  throw UsageError("unknown group '" + group + "'");
}

Bidegree parse_bidegree(const std::string& s) {
  const auto comma = s.find(',');
  try {
    if (comma == std::string::npos) throw UsageError("");
    std::size_t a = 0, b = 0;
    const int x = std::stoi(s.substr(0, comma), &a);
    const int y = std::stoi(s.substr(comma + 1), &b);
    if (a != comma || b != s.size() - comma - 1 || x < 0 || y < 0 || y > 3) throw UsageError("");
    return {x, y};
  } catch (const std::exception&) {
    throw UsageError("bidegree must be X,Y with X >= 0 and 0 <= Y <= 3, got '" + s + "'");
  }
}

Fixture load(const std::string& config) { return config.empty() ? build_fixture() : build_fixture(load_fixture_config(config)); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact invariants of the binary tetrahedral group on symmetric and exterior powers"};
  app.require_subcommand(1);
  std::string config;
  app.add_option("--config", config, "key=value fixture override file")->check(CLI::ExistingFile);

  int max_degree = 20;
  std::string format = "json";
  std::string out_path;
  bool no_timings = false;
  auto* reproduce = app.add_subcommand("reproduce", "run every certificate and write a report");
  reproduce->add_option("--max-degree", max_degree, "largest x-degree certified")->check(CLI::NonNegativeNumber);
  reproduce->add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));
  reproduce->add_option("--out", out_path, "write the report here instead of stdout");
  reproduce->add_flag("--no-timings", no_timings, "omit the timings object");

  std::string group = "G";
  std::string character = "trivial";
  std::string bidegree;
  auto* invariants = app.add_subcommand("invariants", "print an echelon basis of a fixed space");
  invariants->add_option("--group", group, "G, H or Hbar");
  invariants->add_option("--character", character, "trivial or chi");
  invariants->add_option("--bidegree", bidegree, "X,Y")->required();

  auto* molien_cmd = app.add_subcommand("molien", "Molien series of the image group");
  molien_cmd->add_option("--group", group, "G, H or Hbar");
  molien_cmd->add_option("--character", character, "trivial or chi");

  std::string hsop_text;
  int ydeg = 0;
  auto* hilbert = app.add_subcommand("hilbert", "Hilbert series rebuilt from fixed-space dimensions");
  hilbert->add_option("--group", group, "G, H or Hbar");
  hilbert->add_option("--character", character, "trivial or chi");
  hilbert->add_option("--hsop", hsop_text, "comma-separated parameter degrees");
  hilbert->add_option("--ydeg", ydeg, "exterior degree")->check(CLI::Range(0, 3));
  hilbert->add_option("--max-degree", max_degree, "dimension table length")->check(CLI::NonNegativeNumber);

  auto* relations = app.add_subcommand("relations", "express c_i c_j in the A-span of d_1..d_6");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    const Fixture f = load(config);

    if (*reproduce) {
      const PipelineResult r = run_reproduce(f, {max_degree, !no_timings});
      const std::string text = format == "json" ? r.report.dump(2) + "\n" : render_text(r.report);
      if (out_path.empty()) {
        std::cout << text;
      } else {
        std::ofstream os(out_path, std::ios::binary);
        if (!os) throw UsageError("cannot write " + out_path);
        os << text;
      }
      if (!r.pass) {
        std::cerr << "certificate failed: " << r.first_failure << "\n";
        return kExitFail;
      }
      return 0;
    }

    if (*invariants) {
      std::optional<InvariantContext> local;
      const Family fam = select_family(f, group, character, local);
      for (const auto& g : fam.ctx->fixed_space(parse_bidegree(bidegree)).basis) std::cout << to_string(g) << "\n";
      return 0;
    }

    if (*molien_cmd) {
      std::optional<InvariantContext> local;
      const Family fam = select_family(f, group, character, local);
      const LinearCharacter c = fam.molien_chi ? *fam.molien_chi : LinearCharacter::trivial(fam.molien_group);
      std::cout << molien(*fam.molien_group, c).to_string() << "\n";
      return 0;
    }

    if (*hilbert) {
      std::optional<InvariantContext> local;
      const Family fam = select_family(f, group, character, local);
      std::vector<int> degrees;
      if (hsop_text.empty()) {
        degrees = group == "G" ? std::vector<int>{2, 3, 4} : std::vector<int>{2, 2, 2};
      } else {
        std::stringstream ss(hsop_text);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
          try {
            degrees.push_back(std::stoi(tok));
          } catch (const std::exception&) {
            throw UsageError("--hsop expects comma-separated integers");
          }
          if (degrees.back() <= 0) throw UsageError("--hsop degrees must be positive");
        }
      }
      std::vector<long long> dims;
      for (auto v : fixed_dims(*fam.ctx, ydeg, max_degree)) dims.push_back(static_cast<long long>(v));
      const auto rec = hilbert_from_dims(dims, degrees);
      if (!rec) {
        std::cerr << "dimension table too short to determine the numerator; raise --max-degree\n";
        return kExitFail;
      }
      std::cout << rec->to_string() << "\n";
      return 0;
    }

    if (*relations) {
      if (!f.expect) throw UsageError("relations are defined for the standard fixture only");
      const std::vector<std::string> dnames{"d1", "d2", "d3", "d4", "d5", "d6"};
      bool ok = true;
      for (const auto& rel : f.expect->relations) {
        const RelationRecord r = relation_extract(f[rel.first] * f[rel.second], f.elements(dnames), *f.hsop, rel.left);
        std::cout << rel.left << " = " << to_string(r, *f.hsop, dnames) << "  residual " << (r.residual_zero ? "0" : "nonzero")
                  << (r.unique ? "" : "  (not unique)") << "\n";
        ok = ok && r.in_span && r.residual_zero && r.unique;
      }
      return ok ? 0 : kExitFail;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {  // includes parse, modular and field errors
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitUsage;
}
