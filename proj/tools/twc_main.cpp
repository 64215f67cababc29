#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "twc/decider.hpp"
#include "twc/experiments.hpp"
#include "twc/group_ring.hpp"
#include "twc/hall.hpp"
#include "twc/nielsen.hpp"
#include "twc/text.hpp"

namespace {

using nlohmann::json;

constexpr int kExitDecided = 0;
constexpr int kExitError = 1;
constexpr int kExitUndecided = 2;

const char* failure_tag(const twc::Verdict& v) {
  return v.failure == twc::Verdict::Failure::MatrixFailure ? "matrix_failure"
                                                           : "depth_exceeded";
}

std::string verdict_text(const twc::Verdict& v) {
  switch (v.kind) {
    case twc::Verdict::Kind::Distinct:
      return "DISTINCT level=" + std::to_string(v.level);
    case twc::Verdict::Kind::Conjugate:
      return "CONJUGATE witness=" + twc::print_word(*v.witness);
    default:
      return std::string("UNDECIDED reason=") + failure_tag(v) + " level=" +
             std::to_string(v.level);
  }
}

const char* system_tag(twc::SolutionKind k) {
  switch (k) {
    case twc::SolutionKind::NoSolution: return "no_solution";
    case twc::SolutionKind::Unique: return "unique";
    default: return "infinite";
  }
}

json trace_json(const twc::DecisionTrace& trace) {
  json levels = json::array();
  for (const auto& rec : trace.levels) {
    json j;
    j["level"] = rec.level;
    j["system"] = system_tag(rec.system);
    json sol = json::array();
    for (int i = 0; i < rec.solution.size(); ++i) sol.push_back(twc::to_string(rec.solution(i)));
    j["solution"] = std::move(sol);
    json cands = json::array();
    for (const auto& w : rec.candidates) cands.push_back(twc::print_word(w));
    j["candidates"] = std::move(cands);
    levels.push_back(std::move(j));
  }
  return levels;
}

json verdict_json(const twc::Verdict& v, const twc::DecisionTrace& trace) {
  json j;
  switch (v.kind) {
    case twc::Verdict::Kind::Distinct: j["verdict"] = "distinct"; break;
    case twc::Verdict::Kind::Conjugate: j["verdict"] = "conjugate"; break;
    default: j["verdict"] = "undecided"; break;
  }
  j["level"] = v.level;
  if (v.witness) j["witness"] = twc::print_word(*v.witness);
  if (v.kind == twc::Verdict::Kind::Undecided) j["reason"] = failure_tag(v);
  j["trace"] = trace_json(trace);
  return j;
}

int emit_verdict(const twc::Verdict& v, const twc::DecisionTrace& trace,
                 const std::string& format) {
  if (format == "json")
    std::cout << verdict_json(v, trace).dump(2) << "\n";
  else
    std::cout << verdict_text(v) << "\n";
  return v.decided() ? kExitDecided : kExitUndecided;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("TWC_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw std::runtime_error("TWC_SEED is not a valid unsigned integer");
    }
  }
  return 0;
}

struct FormatOption {
  std::string value = "text";
};

void add_format(CLI::App* cmd, FormatOption& fmt, bool allow_csv = false) {
  std::vector<std::string> allowed = {"text", "json"};
  if (allow_csv) allowed.push_back("csv");
  cmd->add_option("--format", fmt.value, "Output format")
      ->check(CLI::IsMember(allowed))
      ->capture_default_str();
}

int run_tc(int rank, const std::string& map_spec, const std::string& g_text,
           const std::string& h_text, bool batch, int depth_cap, const std::string& format) {
  twc::Endomorphism f = twc::parse_endomorphism(rank, rank, map_spec);
  twc::DeciderConfig cfg;
  cfg.depth_cap = depth_cap;
  if (!batch) {
    twc::DecisionTrace trace;
    twc::Verdict v = twc::decide_twisted(f, twc::parse_word(rank, g_text),
                                         twc::parse_word(rank, h_text), cfg, &trace);
    return emit_verdict(v, trace, format);
  }

  // One "g h" pair per line; blank lines are skipped. Exit reports the worst
  // outcome across the batch.
  twc::DeciderScratch scratch;
  json results = json::array();
  int exit_code = kExitDecided;
  std::string line;
  while (std::getline(std::cin, line)) {
    std::istringstream in(line);
    std::string gt, ht, extra;
    if (!(in >> gt)) continue;
    if (!(in >> ht) || (in >> extra))
      throw std::runtime_error("batch line needs exactly two words: " + line);
    twc::DecisionTrace trace;
    twc::Verdict v = twc::decide_twisted(f, twc::parse_word(rank, gt),
                                         twc::parse_word(rank, ht), cfg, &trace, &scratch);
    if (!v.decided()) exit_code = kExitUndecided;
    if (format == "json") {
      json j = verdict_json(v, trace);
      j["g"] = gt;
      j["h"] = ht;
      results.push_back(std::move(j));
    } else {
      std::cout << verdict_text(v) << "\n";
    }
  }
  if (format == "json") std::cout << results.dump(2) << "\n";
  return exit_code;
}

int run_dtc(int k1, int k2, const std::string& phi_spec, const std::string& psi_spec,
            const std::string& h_text, const std::string& k_text, int depth_cap,
            int rank1_cap, const std::string& format) {
  twc::Endomorphism f = twc::parse_endomorphism(k1, k2, phi_spec);
  twc::Endomorphism p = twc::parse_endomorphism(k1, k2, psi_spec);
  twc::Word h = twc::parse_word(k2, h_text);
  twc::Word k = twc::parse_word(k2, k_text);
  twc::DecisionTrace trace;
  twc::Verdict v = [&] {
    // Rank-one fast paths; the codomain one is complete, so it wins when both
    // apply.
    if (k2 == 1) return twc::decide_rank1_codomain(f, p, h, k);
    if (k1 == 1) return twc::decide_rank1_domain(f, p, h, k, rank1_cap);
    twc::DeciderConfig cfg;
    cfg.depth_cap = depth_cap;
    return twc::decide_doubly(f, p, h, k, cfg, &trace);
  }();
  return emit_verdict(v, trace, format);
}

int run_nielsen(int rank, const std::string& map_spec, int depth_cap, bool verify_all_pairs,
                const std::string& format) {
  twc::Endomorphism f = twc::parse_endomorphism(rank, rank, map_spec);
  twc::DeciderConfig cfg;
  cfg.depth_cap = depth_cap;
  twc::NielsenOptions opts;
  opts.verify_all_pairs = verify_all_pairs;
  twc::NielsenResult r = twc::nielsen_number(f, cfg, opts);
  bool exact = r.status == twc::NielsenResult::Status::Exact;
  if (format == "json") {
    json j;
    j["status"] = exact ? "exact" : "partial";
    j["value"] = r.value;
    j["max_level"] = r.max_level;
    json classes = json::array();
    for (const auto& c : r.classes) {
      json cj;
      cj["representative"] = twc::print_word(c.representative);
      cj["total"] = twc::to_string(c.total);
      json members = json::array();
      for (const auto& [w, coeff] : c.members) {
        json m;
        m["word"] = twc::print_word(w);
        m["coefficient"] = twc::to_string(coeff);
        members.push_back(std::move(m));
      }
      cj["members"] = std::move(members);
      classes.push_back(std::move(cj));
    }
    j["classes"] = std::move(classes);
    json unresolved = json::array();
    for (const auto& u : r.unresolved) {
      json uj;
      uj["x"] = twc::print_word(u.x);
      uj["y"] = twc::print_word(u.y);
      uj["reason"] = u.reason;
      unresolved.push_back(std::move(uj));
    }
    j["unresolved"] = std::move(unresolved);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "N" << (exact ? "=" : ">=") << r.value << " ("
              << (exact ? "exact" : "partial") << ", max level " << r.max_level << ")\n";
  }
  return exact ? kExitDecided : kExitUndecided;
}

int run_hallform(int rank, int nil_class, const std::string& word_text,
                 const std::string& format) {
  auto basis = twc::build_basis(rank, nil_class);
  twc::NilpotentElement x = twc::collect(twc::parse_word(rank, word_text), basis);
  if (format == "json") {
    json j;
    j["rank"] = rank;
    j["class"] = nil_class;
    j["normal_form"] = twc::normal_form_text(x);
    json entries = json::array();
    for (int i = 0; i < basis->size(); ++i) {
      if (x.exponent(i) == twc::BigInt(0)) continue;
      json e;
      e["basis"] = basis->entry_text(i);
      e["weight"] = basis->entry(i).weight;
      e["exponent"] = twc::to_string(x.exponent(i));
      entries.push_back(std::move(e));
    }
    j["entries"] = std::move(entries);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << twc::normal_form_text(x) << "\n";
  }
  return kExitDecided;
}

int run_fox(int rank, const std::string& map_spec, const std::string& format) {
  twc::Endomorphism f = twc::parse_endomorphism(rank, rank, map_spec);
  twc::GroupRingElement rt = twc::reidemeister_trace(f);
  if (format == "json") {
    json j;
    j["trace"] = twc::to_string(rt);
    json terms = json::array();
    for (const auto& [w, coeff] : rt.terms()) {
      json t;
      t["word"] = twc::print_word(w);
      t["coefficient"] = twc::to_string(coeff);
      terms.push_back(std::move(t));
    }
    j["terms"] = std::move(terms);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << twc::to_string(rt) << "\n";
  }
  return kExitDecided;
}

std::string table_text(const twc::SummaryTable& table) {
  std::ostringstream out;
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%4s %4s %4s %8s %9s %8s %8s %7s %7s\n", "k1", "k2", "l",
                "trials", "success%", "matrix%", "cmplx%", "depth", "sigma");
  out << buf;
  for (const auto& r : table.rows) {
    std::snprintf(buf, sizeof(buf), "%4d %4d %4d %8lld %9.2f %8.2f %8.2f %7.2f %7.2f\n",
                  r.k1, r.k2, r.l, r.trials, r.success_pct(), r.matrix_failure_pct(),
                  r.complexity_failure_pct(), r.avg_depth(), r.depth_sigma());
    out << buf;
  }
  return out.str();
}

int run_experiment(const std::string& mode, int k, int k1, int k2, std::vector<int> lengths,
                   long long trials, std::uint64_t seed, int threads, double timeout_seconds,
                   int depth_cap, const std::string& log_path, const std::string& format) {
  if (lengths.empty()) lengths.push_back(3);
  twc::DeciderConfig cfg;
  cfg.depth_cap = depth_cap;
  twc::ExperimentOptions opts;
  opts.threads = threads;
  opts.per_trial_timeout =
      std::chrono::milliseconds(static_cast<long long>(timeout_seconds * 1000.0));
  std::ofstream log_stream;
  if (!log_path.empty()) {
    log_stream.open(log_path);
    if (!log_stream) throw std::runtime_error("cannot open log file: " + log_path);
    opts.trial_log = &log_stream;
  }
  twc::SummaryTable table;
  for (int l : lengths) {
    if (mode == "single")
      table.rows.push_back(twc::run_single_experiment(k, l, trials, seed, cfg, opts));
    else
      table.rows.push_back(twc::run_double_experiment(k1, k2, l, trials, seed, cfg, opts));
  }
  if (format == "csv")
    std::cout << twc::to_csv(table);
  else if (format == "json")
    std::cout << twc::to_json(table) << "\n";
  else
    std::cout << table_text(table);
  return kExitDecided;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Twisted conjugacy toolkit for finitely generated free groups"};
  app.require_subcommand(1);
  // --h is a word option on tc/dtc, so help keeps only its long spelling.
  app.set_help_flag("--help", "Print help");

  // tc: twisted conjugacy of g and h under one endomorphism.
  auto* tc = app.add_subcommand("tc", "Decide twisted conjugacy in a free group");
  tc->set_help_flag("--help", "Print help");
  int tc_rank = 2;
  std::string tc_map, tc_g, tc_h;
  bool tc_batch = false;
  int tc_cap = 5;
  FormatOption tc_fmt;
  tc->add_option("--rank", tc_rank, "Free group rank")->required();
  tc->add_option("--map", tc_map, "Endomorphism, e.g. \"a=ab, b=b^2a^4\"")->required();
  tc->add_option("--g", tc_g, "Left word");
  tc->add_option("--h", tc_h, "Right word");
  tc->add_flag("--batch", tc_batch, "Read \"g h\" pairs from stdin");
  tc->add_option("--depth-cap", tc_cap, "Max nilpotency class to try")->capture_default_str();
  add_format(tc, tc_fmt);

  // dtc: doubly twisted conjugacy of h and k under a pair of homomorphisms.
  auto* dtc = app.add_subcommand("dtc", "Decide doubly twisted conjugacy");
  dtc->set_help_flag("--help", "Print help");
  int dtc_k1 = 2, dtc_k2 = 2;
  std::string dtc_phi, dtc_psi, dtc_h, dtc_k;
  int dtc_cap = 5, dtc_rank1_cap = 100;
  FormatOption dtc_fmt;
  dtc->add_option("--k1", dtc_k1, "Domain rank")->required();
  dtc->add_option("--k2", dtc_k2, "Codomain rank")->required();
  dtc->add_option("--phi", dtc_phi, "First homomorphism")->required();
  dtc->add_option("--psi", dtc_psi, "Second homomorphism")->required();
  dtc->add_option("--h", dtc_h, "First word")->required();
  dtc->add_option("--k", dtc_k, "Second word")->required();
  dtc->add_option("--depth-cap", dtc_cap, "Max nilpotency class to try")->capture_default_str();
  dtc->add_option("--cap", dtc_rank1_cap, "Exponent search bound for rank-1 domains")
      ->capture_default_str();
  add_format(dtc, dtc_fmt);

  // nielsen: Nielsen number via the Reidemeister trace.
  auto* ni = app.add_subcommand("nielsen", "Nielsen number of a free group endomorphism");
  ni->set_help_flag("--help", "Print help");
  int ni_rank = 2;
  std::string ni_map;
  int ni_cap = 5;
  bool ni_verify = false;
  FormatOption ni_fmt;
  ni->add_option("--rank", ni_rank, "Free group rank")->required();
  ni->add_option("--map", ni_map, "Endomorphism")->required();
  ni->add_option("--depth-cap", ni_cap, "Max nilpotency class to try")->capture_default_str();
  ni->add_flag("--verify-all-pairs", ni_verify, "Re-decide every pair as a coherence check");
  add_format(ni, ni_fmt);

  // hallform: Hall normal form in a nilpotent quotient.
  auto* hf = app.add_subcommand("hallform", "Hall normal form in a free nilpotent quotient");
  hf->set_help_flag("--help", "Print help");
  int hf_rank = 2, hf_class = 2;
  std::string hf_word;
  FormatOption hf_fmt;
  hf->add_option("--rank", hf_rank, "Free group rank")->required();
  hf->add_option("--class", hf_class, "Nilpotency class")->required();
  hf->add_option("--word", hf_word, "Word to collect")->required();
  add_format(hf, hf_fmt);

  // fox: Reidemeister trace from Fox derivatives.
  auto* fox = app.add_subcommand("fox", "Reidemeister trace of an endomorphism");
  fox->set_help_flag("--help", "Print help");
  int fox_rank = 2;
  std::string fox_map;
  FormatOption fox_fmt;
  fox->add_option("--rank", fox_rank, "Free group rank")->required();
  fox->add_option("--map", fox_map, "Endomorphism")->required();
  add_format(fox, fox_fmt);

  // experiment: Monte Carlo success-rate reproduction.
  auto* ex = app.add_subcommand("experiment", "Random-map success rate experiments");
  ex->set_help_flag("--help", "Print help");
  std::string ex_mode = "single";
  int ex_k = 2, ex_k1 = 2, ex_k2 = 2;
  std::vector<int> ex_l;
  long long ex_trials = 1000;
  std::uint64_t ex_seed = 0;
  bool ex_seed_given = false;
  int ex_threads = 0, ex_cap = 5;
  double ex_timeout = 30.0;
  std::string ex_log;
  FormatOption ex_fmt;
  ex->add_option("--mode", ex_mode, "single (twisted) or double (doubly twisted)")
      ->check(CLI::IsMember({"single", "double"}))
      ->capture_default_str();
  ex->add_option("--k", ex_k, "Rank for single mode")->capture_default_str();
  ex->add_option("--k1", ex_k1, "Domain rank for double mode")->capture_default_str();
  ex->add_option("--k2", ex_k2, "Codomain rank for double mode")->capture_default_str();
  ex->add_option("--l", ex_l, "Max word length; repeat for several rows (default 3)");
  ex->add_option("--trials", ex_trials, "Trials per row")->capture_default_str();
  auto* seed_opt = ex->add_option("--seed", ex_seed, "Base seed (default $TWC_SEED or 0)");
  ex->add_option("--threads", ex_threads, "Worker threads (0 = all cores)")
      ->capture_default_str();
  ex->add_option("--timeout", ex_timeout, "Per-trial wall clock limit in seconds")
      ->capture_default_str();
  ex->add_option("--depth-cap", ex_cap, "Max nilpotency class to try")->capture_default_str();
  ex->add_option("--log", ex_log, "Write per-trial JSON lines to this file");
  add_format(ex, ex_fmt, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (tc->parsed()) {
      if (!tc_batch && (tc_g.empty() || tc_h.empty()))
        throw std::runtime_error("tc needs --g and --h unless --batch is given");
      return run_tc(tc_rank, tc_map, tc_g, tc_h, tc_batch, tc_cap, tc_fmt.value);
    }
    if (dtc->parsed())
      return run_dtc(dtc_k1, dtc_k2, dtc_phi, dtc_psi, dtc_h, dtc_k, dtc_cap, dtc_rank1_cap,
                     dtc_fmt.value);
    if (ni->parsed()) return run_nielsen(ni_rank, ni_map, ni_cap, ni_verify, ni_fmt.value);
    if (hf->parsed()) return run_hallform(hf_rank, hf_class, hf_word, hf_fmt.value);
    if (fox->parsed()) return run_fox(fox_rank, fox_map, fox_fmt.value);
    if (ex->parsed()) {
      ex_seed_given = seed_opt->count() > 0;
      if (!ex_seed_given) ex_seed = default_seed();
      return run_experiment(ex_mode, ex_k, ex_k1, ex_k2, ex_l, ex_trials, ex_seed, ex_threads,
                            ex_timeout, ex_cap, ex_log, ex_fmt.value);
    }
  } catch (const twc::ParseError& e) {
    std::cerr << "error: " << e.message() << " at position " << e.position() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
