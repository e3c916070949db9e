// Copyright 2026 The Mechpoly Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end. Every subcommand writes a JSON report (to --out,
// or stdout) and a one-line summary on stderr.
//
// Exit codes: 0 success or verdict true, 1 verdict false, 2 input error,
// 3 numerical failure.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "mechpoly/bic.h"
#include "mechpoly/errors.h"
#include "mechpoly/game_families.h"
#include "mechpoly/io.h"
#include "mechpoly/mechanisms.h"
#include "mechpoly/random.h"
#include "mechpoly/solver.h"

namespace mechpoly {
namespace {

namespace fs = std::filesystem;

enum ExitCode { kOk = 0, kFalse = 1, kInput = 2, kNumerical = 3 };

struct Common {
  std::string game_path;
  std::string out;
  std::uint64_t seed = 0;
  bool no_timing = false;
  double membership_tol = kMembershipTol;
  double value_tol = 1e-6;
};

struct ModeOptions {
  std::string mode = "exact2";
  double delta = 1e-2;
  int restarts = 32;
  int dim_cap = kDefaultDimCap;
  int grid_dim_cap = 4;
};

void AddCommon(CLI::App* sub, Common& c, bool needs_game = true) {
  if (needs_game) {
    sub->add_option("--game", c.game_path, "game JSON file")->required();
  }
  sub->add_option("--out", c.out,
                  "report file or directory (timestamped name; never "
                  "overwrites)");
  sub->add_option("--seed", c.seed, "random seed (MECHPOLY_SEED overrides)");
  sub->add_flag("--no-timing", c.no_timing, "report runtime_ms as 0");
  sub->add_option("--membership-tol", c.membership_tol, "BIC tolerance")
      ->check(CLI::PositiveNumber);
  sub->add_option("--value-tol", c.value_tol, "value tolerance")
      ->check(CLI::PositiveNumber);
}

void AddModeOptions(CLI::App* sub, ModeOptions& m, bool with_mode) {
  if (with_mode) {
    sub->add_option("--mode", m.mode, "exact2 | grid | alternating")
        ->check(CLI::IsMember({"exact2", "grid", "alternating"}));
  }
  sub->add_option("--delta", m.delta, "grid step in (0, 0.5]")
      ->check(CLI::Range(1e-9, 0.5));
  sub->add_option("--restarts", m.restarts, "alternating restarts")
      ->check(CLI::PositiveNumber);
  sub->add_option("--dim-cap", m.dim_cap, "vertex enumeration variable cap")
      ->check(CLI::PositiveNumber);
  sub->add_option("--grid-dim-cap", m.grid_dim_cap,
                  "free punisher coordinates allowed in grid mode")
      ->check(CLI::NonNegativeNumber);
}

SolverParams ToParams(const ModeOptions& m, std::uint64_t seed) {
  SolverParams p;
  p.dim_cap = m.dim_cap;
  p.grid_step = m.delta;
  p.grid_dim_cap = m.grid_dim_cap;
  p.restarts = m.restarts;
  p.seed = seed;
  return p;
}

MinmaxMode ToMode(const std::string& s) {
  auto mode = ParseMinmaxMode(s);
  if (!mode) throw InputError("unknown mode '" + s + "'");
  return *mode;
}

int PrincipalIndex(const FiniteGame& game, int one_based) {
  if (one_based < 1 || one_based > game.NumPrincipals()) {
    throw InputError("-j " + std::to_string(one_based) +
                     " out of range 1.." +
                     std::to_string(game.NumPrincipals()));
  }
  return one_based - 1;
}

// Violation messages start with their field path ("agents[0]: ...");
// the few without one are mapped by subject.
std::string FieldOf(const std::string& message) {
  if (message.rfind("prior", 0) == 0) return "prior";
  if (message.rfind("J >=", 0) == 0) return "principals";
  if (message.rfind("I >=", 0) == 0) return "agents";
  const auto colon = message.find(':');
  return colon == std::string::npos ? "" : message.substr(0, colon);
}

FiniteGame LoadValidGame(const std::string& path) {
  FiniteGame game = LoadGame(path);
  const ValidationResult v = ValidateGame(game);
  if (!v.ok()) {
    throw InputError(path + ": " + FieldOf(v.violations.front()) + ": " +
                     v.violations.front());
  }
  return game;
}

std::string Timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

fs::path FreshPath(const fs::path& base) {
  if (!fs::exists(base)) return base;
  const std::string stem = base.stem().string();
  const std::string ext = base.extension().string();
  for (int n = 1;; ++n) {
    fs::path candidate =
        base.parent_path() / (stem + "-" + std::to_string(n) + ext);
    if (!fs::exists(candidate)) return candidate;
  }
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError(path.string() + ": cannot write file");
  out << text;
}

class Report {
 public:
  Report(std::string subcommand, const Common& common)
      : subcommand_(std::move(subcommand)), common_(common) {
    doc_["subcommand"] = subcommand_;
    doc_["game_hash"] = nullptr;
    doc_["principal"] = nullptr;
    doc_["kind"] = nullptr;
    doc_["value"] = nullptr;
    doc_["gap_bound"] = nullptr;
    doc_["witness"] = nullptr;
    doc_["seed"] = common.seed;
    doc_["runtime_ms"] = 0;
    doc_["config"] = {{"tolerances",
                       {{"membership", common.membership_tol},
                        {"value", common.value_tol}}}};
  }

  Json& doc() { return doc_; }
  Json& config() { return doc_["config"]; }

  void SetModeConfig(const ModeOptions& m, bool include_mode) {
    if (include_mode) config()["mode"] = m.mode;
    config()["delta"] = m.delta;
    config()["restarts"] = m.restarts;
    config()["dim_cap"] = m.dim_cap;
    config()["grid_dim_cap"] = m.grid_dim_cap;
  }

  void SetCertificate(const FiniteGame& game, const ValueCertificate& cert) {
    doc_["principal"] = game.principal_ids[cert.principal];
    doc_["kind"] = ToString(cert.kind);
    doc_["value"] = cert.value;
    doc_["gap_bound"] = cert.gap_bound;
    doc_["witness"] = ProfileToJson(game, cert.witness)["mechanisms"];
    doc_["details"]["witness_value"] = cert.witness_value;
  }

  void Finish(double runtime_ms, const std::string& summary) {
    doc_["runtime_ms"] =
        common_.no_timing ? 0.0 : std::round(runtime_ms * 1000.0) / 1000.0;
    doc_["summary"] = summary;
    const std::string text = doc_.dump(2) + "\n";
    if (common_.out.empty()) {
      std::cout << text;
    } else {
      fs::path target(common_.out);
      const bool dir = fs::is_directory(target) ||
                       common_.out.back() == '/';
      if (dir) {
        fs::create_directories(target);
        target = target / (subcommand_ + "-" + Timestamp() + ".json");
      }
      target = FreshPath(target);
      WriteText(target, text);
    }
    std::cerr << subcommand_ << ": " << summary << "\n";
  }

 private:
  std::string subcommand_;
  Common common_;
  Json doc_;
};

using Clock = std::chrono::steady_clock;

double ElapsedMs(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

std::string Fmt(double v) {
  std::ostringstream s;
  s.precision(10);
  s << v;
  return s.str();
}

Json BicVerdictJson(const FiniteGame& game, int j, const BicVerdict& v) {
  Json out = {{"principal", game.principal_ids[j]}, {"ok", v.ok}};
  if (v.worst) {
    const int i = v.worst->agent;
    out["worst"] = {{"agent", game.agent_ids[i]},
                    {"truth", game.type_labels[i][v.worst->truth]},
                    {"report", game.type_labels[i][v.worst->report]},
                    {"value", v.worst->value}};
  } else {
    out["worst"] = nullptr;
  }
  return out;
}

// ---------------------------------------------------------------------------

int RunValidate(const Common& c) {
  const auto start = Clock::now();
  Report report("validate", c);
  FiniteGame game = LoadGame(c.game_path);
  const ValidationResult v = ValidateGame(game);
  report.doc()["kind"] = "validation";
  if (v.ok()) report.doc()["game_hash"] = GameHash(game);
  Json violations = Json::array();
  for (const auto& msg : v.violations) {
    violations.push_back({{"field", FieldOf(msg)}, {"message", msg}});
  }
  report.doc()["verdict"] = v.ok() ? "ok" : "invalid";
  report.doc()["details"] = {{"violations", violations},
                             {"warnings", v.warnings}};
  std::string summary =
      v.ok() ? "ok (" + std::to_string(v.warnings.size()) + " warnings)"
             : "invalid: " + FieldOf(v.violations.front()) + ": " +
                   v.violations.front();
  report.Finish(ElapsedMs(start), summary);
  return v.ok() ? kOk : kInput;
}

int RunBicCheck(const Common& c, const std::string& profile_path,
                const std::string& mechanism_path, int j_one) {
  const auto start = Clock::now();
  Report report("bic-check", c);
  const FiniteGame game = LoadValidGame(c.game_path);
  report.doc()["game_hash"] = GameHash(game);
  report.doc()["kind"] = "bic-check";
  Json details;
  bool ok = true;
  std::string summary;
  if (!mechanism_path.empty()) {
    const DirectMechanism mech =
        ParseDirectMechanism(game, LoadJsonFile(mechanism_path));
    if (j_one > 0 && PrincipalIndex(game, j_one) != mech.owner) {
      throw InputError("-j does not match the mechanism owner");
    }
    const BicVerdict v =
        IsIndividuallyBic(game, mech.owner, mech, c.membership_tol);
    ok = v.ok;
    report.doc()["principal"] = game.principal_ids[mech.owner];
    details["individual"] = Json::array({BicVerdictJson(game, mech.owner, v)});
    summary = std::string("principal ") + game.principal_ids[mech.owner] +
              (ok ? " individually BIC" : " not individually BIC");
  } else {
    if (profile_path.empty()) {
      throw InputError("bic-check needs --profile or --mechanism");
    }
    const MechanismProfile profile =
        ParseProfile(game, LoadJsonFile(profile_path));
    Json individual = Json::array();
    bool all = true;
    for (int j = 0; j < game.NumPrincipals(); ++j) {
      if (j_one > 0 && j != PrincipalIndex(game, j_one)) continue;
      const BicVerdict v =
          IsIndividuallyBic(game, j, profile[j], c.membership_tol);
      all = all && v.ok;
      individual.push_back(BicVerdictJson(game, j, v));
    }
    details["individual"] = individual;
    if (j_one > 0) {
      ok = all;
      report.doc()["principal"] =
          game.principal_ids[PrincipalIndex(game, j_one)];
      summary = ok ? "individually BIC" : "not individually BIC";
    } else {
      const ProfileBicVerdict pv =
          IsProfileBic(game, profile, c.membership_tol);
      Json joint = {{"ok", pv.ok},
                    {"value", pv.value},
                    {"joint_enumeration", pv.joint_enumeration}};
      if (pv.agent >= 0) {
        Json reports = Json::array();
        for (int t : pv.reports) {
          reports.push_back(game.type_labels[pv.agent][t]);
        }
        joint["agent"] = game.agent_ids[pv.agent];
        joint["truth"] = game.type_labels[pv.agent][pv.truth];
        joint["reports"] = reports;
      }
      details["profile"] = joint;
      details["product_agreement"] = pv.ok == all;
      ok = pv.ok;
      summary = std::string(ok ? "profile BIC" : "profile not BIC") +
                " (worst joint gain " + Fmt(pv.value) + ")";
    }
  }
  report.doc()["verdict"] = ok;
  report.doc()["details"] = details;
  report.Finish(ElapsedMs(start), summary);
  return ok ? kOk : kFalse;
}

int RunVertices(const Common& c, int j_one, int dim_cap,
                const std::string& export_h) {
  const auto start = Clock::now();
  Report report("vertices", c);
  const FiniteGame game = LoadValidGame(c.game_path);
  const int j = PrincipalIndex(game, j_one);
  const BicPolytope poly = BuildBicPolytope(game, j);
  if (!export_h.empty()) WriteText(export_h, ExportHRepresentation(poly));
  const auto vertices = EnumerateVertices(poly, dim_cap);
  Json list = Json::array();
  for (const auto& v : vertices) list.push_back(DirectMechanismToJson(game, v));
  report.doc()["game_hash"] = GameHash(game);
  report.doc()["principal"] = game.principal_ids[j];
  report.doc()["kind"] = "vertex-enumeration";
  report.doc()["value"] = static_cast<int>(vertices.size());
  report.config()["dim_cap"] = dim_cap;
  report.doc()["details"] = {{"variables", poly.NumVariables()},
                             {"rows", poly.NumRows()},
                             {"vertices", list}};
  report.Finish(ElapsedMs(start),
                std::to_string(vertices.size()) + " vertices for principal " +
                    game.principal_ids[j]);
  return kOk;
}

int RunBestResponse(const Common& c, int j_one, const std::string& profile_path) {
  const auto start = Clock::now();
  Report report("best-response", c);
  const FiniteGame game = LoadValidGame(c.game_path);
  const int j = PrincipalIndex(game, j_one);
  MechanismProfile profile = ParseProfile(game, LoadJsonFile(profile_path));
  for (int k = 0; k < game.NumPrincipals(); ++k) {
    if (k == j) continue;
    const BicVerdict v = IsIndividuallyBic(game, k, profile[k], c.membership_tol);
    if (!v.ok) {
      throw NotBic("mechanism of principal " + game.principal_ids[k] +
                   " is not individually BIC");
    }
  }
  const double before = ExpectedPrincipalPayoff(game, j, profile);
  const BestResponse br = ComputeBestResponse(game, j, profile);
  profile[j] = br.mechanism;
  report.doc()["game_hash"] = GameHash(game);
  report.doc()["principal"] = game.principal_ids[j];
  report.doc()["kind"] = "best-response";
  report.doc()["value"] = br.value;
  report.doc()["gap_bound"] = 0.0;
  report.doc()["witness"] = ProfileToJson(game, profile)["mechanisms"];
  report.doc()["details"] = {{"payoff_of_given_mechanism", before}};
  report.Finish(ElapsedMs(start), "best-response value " + Fmt(br.value));
  return kOk;
}

int RunMinmax(const Common& c, const ModeOptions& m, int j_one) {
  const auto start = Clock::now();
  Report report("minmax", c);
  report.SetModeConfig(m, true);
  const FiniteGame game = LoadValidGame(c.game_path);
  const int j = PrincipalIndex(game, j_one);
  const ValueCertificate cert =
      Minmax(game, j, ToMode(m.mode), ToParams(m, c.seed));
  report.doc()["game_hash"] = GameHash(game);
  report.SetCertificate(game, cert);
  report.Finish(ElapsedMs(start), ToString(cert.kind) + " value " +
                                      Fmt(cert.value) + " gap_bound " +
                                      Fmt(cert.gap_bound));
  return kOk;
}

int RunMaxmin(const Common& c, const ModeOptions& m, int j_one, bool exact) {
  const auto start = Clock::now();
  Report report("maxmin", c);
  report.SetModeConfig(m, false);
  report.config()["exact"] = exact;
  const FiniteGame game = LoadValidGame(c.game_path);
  const int j = PrincipalIndex(game, j_one);
  SolverParams params = ToParams(m, c.seed);
  params.force_exact = exact;
  const ValueCertificate cert = Maxmin(game, j, params);
  report.doc()["game_hash"] = GameHash(game);
  report.SetCertificate(game, cert);
  report.Finish(ElapsedMs(start),
                ToString(cert.kind) + " value " + Fmt(cert.value));
  return kOk;
}

int RunPunish(const Common& c, const ModeOptions& m, int j_one) {
  const auto start = Clock::now();
  Report report("punish", c);
  report.SetModeConfig(m, true);
  const FiniteGame game = LoadValidGame(c.game_path);
  const int j = PrincipalIndex(game, j_one);
  const Punishment p =
      PunishmentProfile(game, j, ToMode(m.mode), ToParams(m, c.seed));
  report.doc()["game_hash"] = GameHash(game);
  report.doc()["principal"] = game.principal_ids[j];
  report.doc()["kind"] = ToString(p.kind);
  report.doc()["value"] = p.value;
  report.doc()["witness"] = ProfileToJson(game, p.profile)["mechanisms"];
  report.Finish(ElapsedMs(start), "punishment holds principal " +
                                      game.principal_ids[j] + " to " +
                                      Fmt(p.value));
  return kOk;
}

int RunMembership(const Common& c, const ModeOptions& m,
                  const std::string& profile_path) {
  const auto start = Clock::now();
  Report report("membership", c);
  report.SetModeConfig(m, true);
  const FiniteGame game = LoadValidGame(c.game_path);
  const MechanismProfile profile =
      ParseProfile(game, LoadJsonFile(profile_path));
  std::vector<ValueCertificate> certs;
  for (int j = 0; j < game.NumPrincipals(); ++j) {
    certs.push_back(Minmax(game, j, ToMode(m.mode), ToParams(m, c.seed)));
  }
  const MembershipResult r =
      RobustPbeMembership(game, profile, certs, c.value_tol);
  Json per = Json::array();
  for (const auto& s : r.principals) {
    per.push_back({{"principal", game.principal_ids[s.principal]},
                   {"payoff", s.payoff},
                   {"threshold", s.threshold},
                   {"slack", s.slack},
                   {"kind", ToString(s.kind)},
                   {"passes", s.passes}});
  }
  Json cert_json = Json::array();
  for (const auto& cert : certs) cert_json.push_back(CertificateToJson(game, cert));
  report.doc()["game_hash"] = GameHash(game);
  report.doc()["kind"] = "membership";
  report.doc()["verdict"] = ToString(r.verdict);
  report.doc()["details"] = {{"profile_bic", r.bic.ok},
                             {"principals", per},
                             {"certificates", cert_json}};
  std::string summary = ToString(r.verdict) + "; slack";
  for (const auto& s : r.principals) summary += " " + Fmt(s.slack);
  report.Finish(ElapsedMs(start), summary);
  const bool pass = r.verdict == MembershipVerdict::kMember ||
                    r.verdict == MembershipVerdict::kConsistentWithMembership;
  return pass ? kOk : kFalse;
}

int RunBuildDrm(const Common& c, const ModeOptions& m,
                const std::string& profile_path,
                const std::vector<std::string>& deviation_kinds,
                int random_deviations, const std::string& candidate_out) {
  const auto start = Clock::now();
  Report report("build-drm", c);
  report.SetModeConfig(m, true);
  const FiniteGame game = LoadValidGame(c.game_path);
  const MechanismProfile target =
      ParseProfile(game, LoadJsonFile(profile_path));
  const SolverParams params = ToParams(m, c.seed);
  std::vector<MechanismProfile> punishments;
  Json values = Json::array();
  for (int j = 0; j < game.NumPrincipals(); ++j) {
    const Punishment p = PunishmentProfile(game, j, ToMode(m.mode), params);
    punishments.push_back(p.profile);
    values.push_back({{"principal", game.principal_ids[j]},
                      {"kind", ToString(p.kind)},
                      {"value", p.value}});
  }
  EquilibriumCandidate candidate = BuildRobustSupport(game, target, punishments);
  for (int j = 0; j < game.NumPrincipals(); ++j) {
    for (const auto& kind : deviation_kinds) {
      if (kind == "full-menu") {
        candidate.deviations[j].push_back(BuildTypeAndDmMechanism(
            game, j, EnumerateVertices(BuildBicPolytope(game, j), m.dim_cap)));
      } else if (kind == "best-response-menu") {
        candidate.deviations[j].push_back(BuildBestResponseMenu(
            game, j, RealizedOtherProfiles(game, candidate.mechanisms, j)));
      } else if (kind == "none") {
      } else {
        throw InputError("unknown deviation kind '" + kind + "'");
      }
    }
    for (int r = 0; r < random_deviations; ++r) {
      candidate.deviations[j].push_back(RandomGeneralMechanism(
          game, j, 2, DeriveSeed(c.seed, 1000 * j + r)));
    }
    if (candidate.deviations[j].empty()) {
      candidate.deviations[j].push_back(candidate.mechanisms[j]);
    }
  }
  const Json candidate_json = CandidateToJson(game, candidate);
  if (!candidate_out.empty()) {
    WriteText(FreshPath(candidate_out), candidate_json.dump(2) + "\n");
  }
  const ContinuationVerdict on_path = CheckContinuationEquilibrium(
      game, candidate.mechanisms, candidate.on_path, c.membership_tol);
  report.doc()["game_hash"] = GameHash(game);
  report.doc()["kind"] = "deviator-reporting";
  report.doc()["verdict"] = on_path.ok;
  report.doc()["details"] = {{"punishments", values},
                             {"on_path_continuation_equilibrium", on_path.ok},
                             {"candidate", candidate_json}};
  report.Finish(ElapsedMs(start),
                std::string("built deviator-reporting profile; on-path play ") +
                    (on_path.ok ? "is" : "is NOT") +
                    " a continuation equilibrium");
  return on_path.ok ? kOk : kFalse;
}

int RunCheckEq(const Common& c, const std::string& candidate_path,
               const std::string& notion_name) {
  const auto start = Clock::now();
  Report report("check-eq", c);
  report.config()["notion"] = notion_name;
  const FiniteGame game = LoadValidGame(c.game_path);
  const auto notion = ParseEquilibriumNotion(notion_name);
  if (!notion) throw InputError("unknown notion '" + notion_name + "'");
  const EquilibriumCandidate candidate =
      ParseCandidate(game, LoadJsonFile(candidate_path));
  const NotionVerdict v =
      CheckEquilibriumNotion(game, candidate, *notion, c.value_tol);
  Json deviations = Json::array();
  for (const auto& d : v.deviations) {
    deviations.push_back({{"principal", game.principal_ids[d.principal]},
                          {"index", d.index},
                          {"identical", d.identical},
                          {"continuation_equilibria", d.num_equilibria},
                          {"value", d.value},
                          {"profitable", d.profitable}});
  }
  report.doc()["game_hash"] = GameHash(game);
  report.doc()["kind"] = "equilibrium-check";
  report.doc()["verdict"] = ToString(v.status);
  report.doc()["details"] = {
      {"notion", ToString(v.notion)},
      {"strategy_class", "pure-strategy verdict"},
      {"on_path_continuation_equilibrium", v.on_path.ok},
      {"equilibrium_payoffs", v.equilibrium_payoffs},
      {"deviations", deviations}};
  report.Finish(ElapsedMs(start),
                ToString(v.notion) + ": " + ToString(v.status));
  return v.status == NotionStatus::kTrue ? kOk : kFalse;
}

int RunSimulate(const Common& c, const std::string& candidate_path,
                const std::string& profile_path, int rounds) {
  const auto start = Clock::now();
  Report report("simulate", c);
  report.config()["rounds"] = rounds;
  const FiniteGame game = LoadValidGame(c.game_path);
  std::vector<GeneralMechanism> mechanisms;
  ContinuationStrategies strategies;
  if (!candidate_path.empty()) {
    const EquilibriumCandidate candidate =
        ParseCandidate(game, LoadJsonFile(candidate_path));
    mechanisms = candidate.mechanisms;
    strategies = candidate.on_path;
  } else if (!profile_path.empty()) {
    // Direct mechanisms with truthful reporting.
    const MechanismProfile profile =
        ParseProfile(game, LoadJsonFile(profile_path));
    PureContinuation truthful;
    truthful.principal.assign(game.NumPrincipals(), 0);
    truthful.agent.resize(game.NumAgents());
    for (int i = 0; i < game.NumAgents(); ++i) {
      for (int k = 0; k < game.NumPrincipals(); ++k) {
        std::vector<int> map(game.NumTypes(i));
        for (int t = 0; t < game.NumTypes(i); ++t) map[t] = t;
        truthful.agent[i].push_back(map);
      }
    }
    for (const auto& pi : profile) {
      mechanisms.push_back(StandardDirectMechanism(game, pi));
    }
    strategies = ToMixed(game, mechanisms, truthful);
  } else {
    throw InputError("simulate needs --candidate or --profile");
  }
  const SimulationReport sim =
      Simulate(game, mechanisms, strategies, c.seed, rounds);
  bool consistent = true;
  Json principals = Json::array();
  for (int j = 0; j < game.NumPrincipals(); ++j) {
    const bool within = std::abs(sim.principal_mean[j] -
                                 sim.principal_analytic[j]) <=
                        3.0 * sim.principal_stderr[j] + 1e-12;
    consistent = consistent && within;
    principals.push_back({{"principal", game.principal_ids[j]},
                          {"mean", sim.principal_mean[j]},
                          {"stderr", sim.principal_stderr[j]},
                          {"analytic", sim.principal_analytic[j]},
                          {"within_3_stderr", within}});
  }
  Json agents = Json::array();
  for (int i = 0; i < game.NumAgents(); ++i) {
    const bool within =
        std::abs(sim.agent_mean[i] - sim.agent_analytic[i]) <=
        3.0 * sim.agent_stderr[i] + 1e-12;
    consistent = consistent && within;
    agents.push_back({{"agent", game.agent_ids[i]},
                      {"mean", sim.agent_mean[i]},
                      {"stderr", sim.agent_stderr[i]},
                      {"analytic", sim.agent_analytic[i]},
                      {"within_3_stderr", within}});
  }
  report.doc()["game_hash"] = GameHash(game);
  report.doc()["kind"] = "simulation";
  report.doc()["verdict"] = consistent;
  report.doc()["details"] = {{"rounds", sim.rounds},
                             {"principals", principals},
                             {"agents", agents},
                             {"action_frequency", sim.action_frequency}};
  report.Finish(ElapsedMs(start),
                std::to_string(rounds) + " rounds; " +
                    (consistent ? "all payoffs within 3 standard errors"
                                : "some payoff outside 3 standard errors"));
  return kOk;
}

int RunSearchGap(const Common& c, const ModeOptions& m,
                 const std::string& family, int budget, int principals,
                 int agents) {
  const auto start = Clock::now();
  Report report("search-gap", c);
  report.SetModeConfig(m, false);
  report.config()["family"] = family;
  report.config()["budget"] = budget;
  GapSearchParams params;
  const auto parsed = ParseGapFamily(family);
  if (!parsed) throw InputError("unknown family '" + family + "'");
  params.family = *parsed;
  params.budget = budget;
  params.grid_step = m.delta;
  params.seed = c.seed;
  params.solver = ToParams(m, c.seed);
  params.random_spec.num_principals = principals;
  params.random_spec.num_agents = agents;
  params.random_spec.max_types = 1;
  params.random_spec.min_actions = 2;
  params.random_spec.max_actions = 2;
  if (params.family == GapFamily::kRandom) {
    report.config()["principals"] = principals;
    report.config()["agents"] = agents;
  }
  const GapSearchResult r = SearchMinmaxMaxminGap(params);
  report.doc()["kind"] = "gap-search";
  if (r.found) {
    report.doc()["game_hash"] = GameHash(r.best_game);
    report.doc()["principal"] = r.best_game.principal_ids[r.best_principal];
    report.doc()["value"] = r.gap;
    report.doc()["gap_bound"] = r.minmax_certificate.gap_bound;
    report.doc()["witness"] =
        ProfileToJson(r.best_game, r.minmax_certificate.witness)["mechanisms"];
    report.doc()["details"] = {
        {"evaluated", r.evaluated},
        {"instances_with_gap_above_0.01", r.instances_above_001},
        {"best_index", r.best_index},
        {"best_instance_seed", r.best_seed},
        {"maxmin", CertificateToJson(r.best_game, r.maxmin_certificate)},
        {"minmax", CertificateToJson(r.best_game, r.minmax_certificate)},
        {"certified_minmax_lower_bound", r.minmax_lower_bound},
        {"minmax_upper_bound", r.minmax_upper_bound},
        {"game", GameToJson(r.best_game)}};
  } else {
    report.doc()["value"] = 0.0;
    report.doc()["details"] = {{"evaluated", r.evaluated}};
  }
  report.doc()["verdict"] = r.found && r.gap > 0.0;
  report.Finish(ElapsedMs(start),
                "best certified gap " + Fmt(r.gap) + " over " +
                    std::to_string(r.evaluated) + " instances (" +
                    std::to_string(r.instances_above_001) + " above 0.01)");
  return kOk;
}

int Main(int argc, char** argv) {
  CLI::App app{"Competing-mechanism game solver"};
  app.require_subcommand(1);
  std::function<int()> run;

  Common common;
  ModeOptions mode;
  int j_one = 0;
  std::string profile_path, mechanism_path, candidate_path, export_h;
  std::string candidate_out, notion = "robust", family = "gap3";
  std::vector<std::string> deviation_kinds = {"full-menu"};
  int random_deviations = 0, rounds = 100000, budget = 500;
  int search_principals = 3, search_agents = 3;
  bool exact = false;

  auto* validate = app.add_subcommand("validate", "check game invariants");
  AddCommon(validate, common);
  validate->callback([&] { run = [&] { return RunValidate(common); }; });

  auto* bic = app.add_subcommand("bic-check", "individual and profile BIC");
  AddCommon(bic, common);
  bic->add_option("--profile", profile_path, "direct mechanism profile");
  bic->add_option("--mechanism", mechanism_path, "single direct mechanism");
  bic->add_option("-j", j_one, "principal (1-based)");
  bic->callback([&] {
    run = [&] { return RunBicCheck(common, profile_path, mechanism_path, j_one); };
  });

  auto* vertices = app.add_subcommand("vertices", "enumerate BIC vertices");
  AddCommon(vertices, common);
  vertices->add_option("-j", j_one, "principal (1-based)")->required();
  vertices->add_option("--dim-cap", mode.dim_cap, "variable cap")
      ->check(CLI::PositiveNumber);
  vertices->add_option("--export-h", export_h, "write H-representation");
  vertices->callback([&] {
    run = [&] { return RunVertices(common, j_one, mode.dim_cap, export_h); };
  });

  auto* best = app.add_subcommand("best-response", "BIC best response");
  AddCommon(best, common);
  best->add_option("-j", j_one, "principal (1-based)")->required();
  best->add_option("--profile", profile_path, "direct mechanism profile")
      ->required();
  best->callback([&] {
    run = [&] { return RunBestResponse(common, j_one, profile_path); };
  });

  auto* minmax = app.add_subcommand("minmax", "minmax value");
  AddCommon(minmax, common);
  AddModeOptions(minmax, mode, true);
  minmax->add_option("-j", j_one, "principal (1-based)")->required();
  minmax->callback([&] { run = [&] { return RunMinmax(common, mode, j_one); }; });

  auto* maxmin = app.add_subcommand("maxmin", "maxmin value");
  AddCommon(maxmin, common);
  AddModeOptions(maxmin, mode, false);
  maxmin->add_option("-j", j_one, "principal (1-based)")->required();
  maxmin->add_flag("--exact", exact, "fail instead of falling back to "
                                     "the heuristic");
  maxmin->callback(
      [&] { run = [&] { return RunMaxmin(common, mode, j_one, exact); }; });

  auto* punish = app.add_subcommand("punish", "punishment profile");
  AddCommon(punish, common);
  AddModeOptions(punish, mode, true);
  punish->add_option("-j", j_one, "principal (1-based)")->required();
  punish->callback([&] { run = [&] { return RunPunish(common, mode, j_one); }; });

  auto* membership =
      app.add_subcommand("membership", "robust-PBE allocation membership");
  AddCommon(membership, common);
  AddModeOptions(membership, mode, true);
  membership->add_option("--profile", profile_path, "direct mechanism profile")
      ->required();
  membership->callback([&] {
    run = [&] { return RunMembership(common, mode, profile_path); };
  });

  auto* drm = app.add_subcommand("build-drm",
                                 "deviator-reporting support for a profile");
  AddCommon(drm, common);
  AddModeOptions(drm, mode, true);
  drm->add_option("--profile", profile_path, "target direct profile")
      ->required();
  drm->add_option("--deviations", deviation_kinds,
                  "full-menu | best-response-menu | none")
      ->delimiter(',');
  drm->add_option("--random-deviations", random_deviations,
                  "random finite deviation mechanisms per principal")
      ->check(CLI::NonNegativeNumber);
  drm->add_option("--candidate-out", candidate_out, "write candidate JSON");
  drm->callback([&] {
    run = [&] {
      return RunBuildDrm(common, mode, profile_path, deviation_kinds,
                         random_deviations, candidate_out);
    };
  });

  auto* check = app.add_subcommand("check-eq", "equilibrium notion check");
  AddCommon(check, common);
  check->add_option("--candidate", candidate_path, "candidate JSON")
      ->required();
  check->add_option("--notion", notion, "pbe | robust | strongly-robust")
      ->check(CLI::IsMember({"pbe", "robust", "strongly-robust"}));
  check->callback(
      [&] { run = [&] { return RunCheckEq(common, candidate_path, notion); }; });

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo payoffs");
  AddCommon(simulate, common);
  simulate->add_option("--candidate", candidate_path, "candidate JSON");
  simulate->add_option("--profile", profile_path,
                       "direct profile, truthful reporting");
  simulate->add_option("--rounds", rounds, "rounds")->check(CLI::PositiveNumber);
  simulate->callback([&] {
    run = [&] {
      return RunSimulate(common, candidate_path, profile_path, rounds);
    };
  });

  auto* search = app.add_subcommand("search-gap",
                                    "search for minmax above maxmin");
  AddCommon(search, common, false);
  common.seed = 42;
  AddModeOptions(search, mode, false);
  search->add_option("--family", family, "gap3 | constant | random")
      ->check(CLI::IsMember({"gap3", "constant", "random"}));
  search->add_option("--budget", budget, "instances")
      ->check(CLI::NonNegativeNumber);
  search->add_option("--principals", search_principals,
                     "random family: principals")
      ->check(CLI::Range(2, 6));
  search->add_option("--agents", search_agents, "random family: agents")
      ->check(CLI::Range(1, 6));
  search->callback([&] {
    run = [&] {
      return RunSearchGap(common, mode, family, budget, search_principals,
                          search_agents);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }
  // The seed default differs per subcommand: 42 for search-gap, else 0.
  if (!search->parsed() && common.seed == 42 &&
      app.get_subcommands().front()->count("--seed") == 0) {
    common.seed = 0;
  }
  if (const char* env = std::getenv("MECHPOLY_SEED")) {
    try {
      common.seed = std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "error: MECHPOLY_SEED is not an unsigned integer\n";
      return kInput;
    }
  }
  try {
    return run();
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const MechpolyError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  }
}

}  // namespace
}  // namespace mechpoly

int main(int argc, char** argv) { return mechpoly::Main(argc, argv); }
