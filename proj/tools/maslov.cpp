// maslov: command-line front end. Verdicts go out through exit codes only.
#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "maslov/acceptance.hpp"
#include "maslov/fragments.hpp"
#include "maslov/hardfam.hpp"
#include "maslov/jsonio.hpp"
#include "maslov/modelbuild.hpp"
#include "maslov/reductions.hpp"
#include "maslov/search.hpp"

using namespace maslov;

namespace {

enum Exit { kSat = 0, kUnsat = 1, kUnknown = 2, kInput = 3 };

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  uint64_t seed = 1;
  uint64_t budget = 10000000;
  int max_size = 4;
  int jobs = 1;
  bool json = false;
};

std::string slurp(const std::string& path) {
  if (path == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    return os.str();
  }
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Formula load_formula(const std::string& path) {
  try {
    return parse_formula(slurp(path));
  } catch (const InputError&) {
    throw;
  } catch (const std::exception& e) {
    throw InputError(std::string("parse error: ") + e.what());
  }
}

Json load_json(const std::string& path) {
  try {
    return Json::parse(slurp(path));
  } catch (const Json::exception& e) {
    throw InputError(std::string("bad JSON in ") + path + ": " + e.what());
  }
}

void emit(const Config& cfg, const Json& j, const std::string& text) {
  if (cfg.json) std::cout << j.dump(2) << "\n";
  else std::cout << text;
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << j.dump(2) << "\n";
}

Json classification_to_json(const Classification& c) {
  Json j;
  Json cls = Json::array();
  for (auto k : c.classes) cls.push_back(class_name(k, c.forall_k));
  j["classes"] = cls;
  j["grade"] = c.grade;
  j["specials"] = c.special_names;
  j["universal_count"] = c.universal_count;
  j["diagnostics"] = c.diagnostics;
  return j;
}

// Game cross-check of a found model: Eloisa should win on its type set.
std::string cross_check(const Formula& f, const Structure& model, const Config& cfg) {
  auto c = classify(f);
  if (!c.has(FragClass::Kbar) && !c.has(FragClass::DKbar)) return "n/a";
  Prenex probe = to_prenex(f, true);
  int G = probe.K() + probe.M();
  for (auto& part : conjuncts(f)) G = std::max(G, to_prenex(part, true).K() + to_prenex(part, true).M());
  OuterTypeSet beta = extract_type_set(augment(model, G), G);
  if (c.has(FragClass::Kbar)) {
    SatGame g(probe, beta);
    return verdict_name(g.solve(cfg.budget).verdict);
  }
  return verdict_name(solve_conjunction(f, beta, cfg.budget).verdict);
}

int cmd_classify(const Config& cfg, const std::string& file) {
  auto c = classify(load_formula(file));
  Json j = classification_to_json(c);
  std::ostringstream os;
  for (auto& s : j["classes"]) os << s.get<std::string>() << "\n";
  os << "grade " << c.grade << "\n";
  for (auto& d : c.diagnostics) os << "  " << d << "\n";
  emit(cfg, j, os.str());
  return c.classes.count(FragClass::None) && c.classes.size() == 1 ? kUnsat : kSat;
}

int cmd_check(const Config& cfg, const std::string& file, const std::string& sfile) {
  Formula f = load_formula(file);
  Structure A = [&] {
    try {
      return structure_from_json(load_json(sfile), &f.sig);
    } catch (const InputError&) {
      throw;
    } catch (const std::exception& e) {
      throw InputError(std::string("bad structure: ") + e.what());
    }
  }();
  bool ok = model_check(A, f, {}, cfg.jobs);
  emit(cfg, Json{{"holds", ok}}, ok ? "true\n" : "false\n");
  return ok ? kSat : kUnsat;
}

int cmd_sat(const Config& cfg, const std::string& file) {
  Formula f = load_formula(file);
  auto c = classify(f);
  if (c.classes.empty() || (c.classes.size() == 1 && c.has(FragClass::None))) {
    for (auto& d : c.diagnostics) std::cerr << d << "\n";
    throw InputError("formula is outside every supported class");
  }
  auto sr = bounded_model_search(f, cfg.max_size, cfg.budget);
  Json j;
  j["classes"] = classification_to_json(c)["classes"];
  std::ostringstream os;
  int code = kUnknown;
  switch (sr.verdict) {
    case SearchVerdict::Sat: {
      std::string game = cross_check(f, sr.model, cfg);
      j["verdict"] = "sat";
      j["size"] = sr.model.unnamed;
      j["game"] = game;
      j["model"] = structure_to_json(sr.model);
      os << "sat, model size " << sr.model.unnamed << "; game: " << game << "\n"
         << structure_to_json(sr.model).dump() << "\n";
      code = kSat;
      break;
    }
    case SearchVerdict::NoneUpTo:
      j["verdict"] = "unsat<=N";
      j["bound"] = sr.bound;
      os << "no model up to size " << sr.bound << "\n";
      code = kUnsat;
      break;
    case SearchVerdict::BudgetExhausted:
      j["verdict"] = "unknown";
      j["bound"] = sr.bound;
      os << "unknown: budget exhausted at size " << sr.bound << "\n";
      break;
  }
  emit(cfg, j, os.str());
  return code;
}

int cmd_solve_game(const Config& cfg, const std::string& ffile, const std::string& bfile, const std::string& out) {
  Formula f = load_formula(ffile);
  OuterTypeSet beta = type_set_from_json(load_json(bfile), &f.sig);
  SatGame g(to_prenex(f, true), std::move(beta));
  auto res = g.solve(cfg.budget);
  Json j;
  j["verdict"] = verdict_name(res.verdict);
  if (res.verdict == GameVerdict::EloisaWins) j["strategy"] = strategy_to_json(res.strategy);
  if (res.verdict == GameVerdict::AbelardWins) {
    Json line = Json::array();
    for (auto& p : res.line) line.push_back(position_to_json(p));
    j["line"] = line;
  }
  if (!out.empty()) write_json_file(out, j);
  emit(cfg, j, verdict_name(res.verdict) + "\n");
  return res.verdict == GameVerdict::EloisaWins ? kSat : res.verdict == GameVerdict::AbelardWins ? kUnsat : kUnknown;
}

int cmd_build_model(const Config& cfg, const std::string& file, bool param, const std::string& out) {
  Formula f = load_formula(file);
  PipelineOptions opt;
  opt.seed = cfg.seed;
  opt.max_search = cfg.max_size;
  opt.budget = cfg.budget;
  opt.jobs = cfg.jobs;
  opt.param = param;
  auto rep = run_pipeline(f, opt);
  Json j;
  j["ok"] = rep.ok;
  j["stage"] = rep.stage;
  j["detail"] = rep.detail;
  j["colours"] = rep.colours;
  j["vertices"] = rep.vertices;
  j["verified"] = rep.verified;
  if (rep.ok) j["model"] = structure_to_json(rep.model);
  if (!out.empty() && rep.ok) write_json_file(out, structure_to_json(rep.model));
  std::ostringstream os;
  os << (rep.verified ? "verified" : "not verified") << " (stage " << rep.stage << ", " << rep.vertices
     << " vertices)" << (rep.detail.empty() ? "" : ": " + rep.detail) << "\n";
  emit(cfg, j, os.str());
  if (rep.ok) return kSat;
  return rep.verdict == GameVerdict::AbelardWins ? kUnsat : kUnknown;
}

int cmd_tournament_sample(const Config& cfg, int R, int Q, int n) {
  if (R < 1 || Q < 1) throw InputError("colour counts must be positive");
  int n0 = n > 0 ? n : default_sample_n(R, Q);
  auto s = sample_paradoxical(R, Q, cfg.seed, n0, n > 0 ? n0 : 0, 32, cfg.jobs);
  if (!s.tournament) {
    emit(cfg, Json{{"found", false}, {"attempts", s.attempts}}, "no paradoxical sample\n");
    return kUnknown;
  }
  Json j = tournament_to_json(*s.tournament);
  emit(cfg, j, j.dump() + "\n");
  return kSat;
}

int cmd_tournament_paley(const Config& cfg, uint64_t p) {
  if (!is_prime(p) || p % 4 != 3) throw InputError("p must be a prime congruent to 3 mod 4");
  Json j = tournament_to_json(build_paley(p));
  emit(cfg, j, j.dump() + "\n");
  return kSat;
}

int cmd_tournament_verify(const Config& cfg, const std::string& file, int k) {
  ColourfulTournament t = [&] {
    try {
      return tournament_from_json(load_json(file));
    } catch (const InputError&) {
      throw;
    } catch (const std::exception& e) {
      throw InputError(std::string("bad tournament: ") + e.what());
    }
  }();
  bool ok;
  Json j;
  if (k > 0) {
    ok = verify_k_extension(t, k).pass;
    j["k_extension"] = k;
  } else {
    auto rep = verify_paradoxical(t, cfg.jobs);
    ok = rep.pass;
    if (!ok) j["counterexample"] = {{"r", rep.r}, {"a", rep.a}, {"q", rep.q}};
  }
  j["pass"] = ok;
  emit(cfg, j, ok ? "pass\n" : "fail\n");
  return ok ? kSat : kUnsat;
}

int cmd_gen_phin(const Config& cfg, int n, bool cf, const std::string& model_out) {
  if (n < 3) throw InputError("n must be at least 3");
  Formula f = cf ? gen_phi_n_constant_free(n) : gen_phi_n(n);
  std::string text = to_string(f);
  Json j{{"n", n}, {"constant_free", cf}, {"formula", text}};
  if (!model_out.empty()) {
    Structure A = cf ? prototypical_model_constant_free(n) : prototypical_model(n);
    write_json_file(model_out, structure_to_json(A));
  }
  emit(cfg, j, text + "\n");
  return kSat;
}

int cmd_translate_fauf(const Config& cfg, const std::string& file) {
  Formula f = load_formula(file);
  std::string why;
  if (!in_forall_uf(f, &why)) throw InputError("not in forall-UF: " + why);
  FaufTranslation t = translate_fauf(f);
  Json parts = Json::array();
  std::ostringstream os;
  for (auto& c : t.conjuncts()) {
    parts.push_back(to_string(c));
    os << to_string(c) << "\n";
  }
  emit(cfg, Json{{"conjuncts", parts}, {"formula", to_string(t.conjunction())}}, os.str());
  return kSat;
}

int cmd_translate_constants(const Config& cfg, const std::string& file, const std::string& partition) {
  Formula f = load_formula(file);
  std::vector<ConstantPartition> ps;
  if (partition.empty()) {
    ps = enumerate_partitions(f.sig.num_constants());
  } else {
    try {
      ps.push_back(parse_partition(f.sig, partition));
    } catch (const std::exception& e) {
      throw InputError(std::string("bad partition: ") + e.what());
    }
  }
  Json arr = Json::array();
  std::ostringstream os;
  for (auto& p : ps) {
    std::string g = to_string(reduce_constants(f, p));
    arr.push_back({{"partition", p.to_string(f.sig)}, {"formula", g}});
    os << p.to_string(f.sig) << "\n  " << g << "\n";
  }
  emit(cfg, arr, os.str());
  return kSat;
}

int cmd_demo(const Config& cfg, uint64_t paley_small, uint64_t paley_ext) {
  AcceptanceConfig ac;
  ac.seed = cfg.seed;
  ac.jobs = cfg.jobs;
  ac.budget = cfg.budget;
  ac.max_size = cfg.max_size;
  ac.paley_small = paley_small;
  ac.paley_extension = paley_ext;
  auto rows = run_acceptance(ac);
  emit(cfg, acceptance_json(rows, ac), acceptance_text(rows));
  for (auto& r : rows)
    if (!r.pass) return 1;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Toolkit for Maslov's class: classification, games, tournaments, model building"};
  app.require_subcommand(1);
  app.fallthrough();
  Config cfg;
  app.add_option("--seed", cfg.seed, "RNG seed (MASLOV_SEED overrides)");
  app.add_option("--budget", cfg.budget, "node budget for searches and games")->check(CLI::PositiveNumber);
  app.add_option("--max-size", cfg.max_size, "largest model size tried")->check(CLI::PositiveNumber);
  app.add_option("--jobs", cfg.jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--json", cfg.json, "machine-readable output");

  std::string file, file2, out;
  std::function<int()> run;

  auto* classify_cmd = app.add_subcommand("classify", "fragment membership and grade");
  classify_cmd->add_option("formula", file, "formula file, - for stdin")->required();
  classify_cmd->callback([&] { run = [&] { return cmd_classify(cfg, file); }; });

  auto* check = app.add_subcommand("check", "model-check a structure");
  check->add_option("formula", file)->required();
  check->add_option("structure", file2, "structure JSON")->required();
  check->callback([&] { run = [&] { return cmd_check(cfg, file, file2); }; });

  auto* sat = app.add_subcommand("sat", "bounded model search with a game cross-check");
  sat->add_option("formula", file)->required();
  sat->callback([&] { run = [&] { return cmd_sat(cfg, file); }; });

  auto* game = app.add_subcommand("solve-game", "solve the satisfiability game on a type set");
  game->add_option("--formula", file)->required();
  game->add_option("--beta", file2, "type set JSON")->required();
  game->add_option("--out", out, "write the strategy or losing line here");
  game->callback([&] { run = [&] { return cmd_solve_game(cfg, file, file2, out); }; });

  bool param = false;
  auto* build = app.add_subcommand("build-model", "search, game, tournament, stages, model_check");
  build->add_option("formula", file)->required();
  build->add_flag("--param", param, "use the witness-chain grid (forall*exists* prefixes)");
  build->add_option("--out", out, "write the model JSON here");
  build->callback([&] { run = [&] { return cmd_build_model(cfg, file, param, out); }; });

  auto* tour = app.add_subcommand("tournament", "colourful tournaments");
  tour->require_subcommand(1);
  int R = 1, Q = 1, n = 0, k = 0;
  uint64_t p = 7;
  auto* tsample = tour->add_subcommand("sample", "sample a paradoxical tournament");
  tsample->add_option("--vertex-colours", R);
  tsample->add_option("--arc-colours", Q);
  tsample->add_option("--n", n, "vertices per colour (default: the sampler's bound)");
  tsample->callback([&] { run = [&] { return cmd_tournament_sample(cfg, R, Q, n); }; });
  auto* tpaley = tour->add_subcommand("paley", "Paley tournament on a prime");
  tpaley->add_option("--p", p)->required();
  tpaley->callback([&] { run = [&] { return cmd_tournament_paley(cfg, p); }; });
  auto* tverify = tour->add_subcommand("verify", "check paradoxicality, or the k-extension property");
  tverify->add_option("tournament", file)->required();
  tverify->add_option("--k-extension", k);
  tverify->callback([&] { run = [&] { return cmd_tournament_verify(cfg, file, k); }; });

  bool cf = false;
  auto* gen = app.add_subcommand("gen-phin", "generate the hard family member");
  gen->add_option("--n", n)->required();
  gen->add_flag("--constant-free", cf);
  gen->add_option("--model", out, "write the prototypical model JSON here");
  gen->callback([&] { run = [&] { return cmd_gen_phin(cfg, n, cf, out); }; });

  auto* tr = app.add_subcommand("translate", "formula translations");
  tr->require_subcommand(1);
  auto* tfauf = tr->add_subcommand("fauf", "forall-UF to Kbar-Skolem conjuncts");
  tfauf->add_option("formula", file)->required();
  tfauf->callback([&] { run = [&] { return cmd_translate_fauf(cfg, file); }; });
  std::string partition;
  auto* tconst = tr->add_subcommand("constants", "identify constants along a partition (all if omitted)");
  tconst->add_option("formula", file)->required();
  tconst->add_option("--partition", partition, "blocks like \"a b | c\"");
  tconst->callback([&] { run = [&] { return cmd_translate_constants(cfg, file, partition); }; });

  uint64_t paley_small = 7, paley_ext = 67;
  auto* demo = app.add_subcommand("demo", "run the acceptance suite");
  demo->add_option("--paley-prime", paley_small, "prime for the 1-paradoxical Paley check");
  demo->add_option("--paley-extension-prime", paley_ext, "prime for the 2-extension Paley check");
  demo->callback([&] { run = [&] { return cmd_demo(cfg, paley_small, paley_ext); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kInput;
  }
  if (const char* s = std::getenv("MASLOV_SEED")) {
    char* end = nullptr;
    cfg.seed = std::strtoull(s, &end, 10);
    if (!*s || *end) {
      std::cerr << "MASLOV_SEED is not a number\n";
      return kInput;
    }
  }
  try {
    return run();
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const ResourceGuard& e) {
    std::cerr << "resource guard: " << e.what() << "\n";
    return kUnknown;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return kUnknown;
  }
}
