// Command-line front end: generation, verification, measurement, the
// amplifier and bootstrap constructions, the interval partition, exact
// subset search, and the convergence checks, over the shared sequence text
// format. Reports go to standard output (JSON is newline-delimited);
// progress goes to standard error.
//
// Exit codes: 0 success, 1 domain error (including a found progression in
// `verify` and any ClaimViolated), 2 usage error, 3 I/O or parse error.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "apfree/apfree.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum class Format { text, json, csv };

struct CommonOpts {
  std::string format = "text";
  std::string out_path;
  std::string cache_dir;
  unsigned jobs = 1;
  std::uint64_t seed = 0;

  [[nodiscard]] Format fmt() const {
    if (format == "json") return Format::json;
    if (format == "csv") return Format::csv;
    return Format::text;
  }
};

std::ostream& open_out(const CommonOpts& opts, std::ofstream& file) {
  if (opts.out_path.empty()) return std::cout;
  file.open(opts.out_path, std::ios::trunc);
  if (!file) throw apfree::IoError("cannot write " + opts.out_path);
  return file;
}

/// Round-trippable float formatting for the text and csv outputs.
std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

fs::path effective_cache_dir(const CommonOpts& opts) {
  if (!opts.cache_dir.empty()) return opts.cache_dir;
  if (const char* env = std::getenv("APFREE_CACHE"); env && *env) return env;
  return ".apfree-cache";
}

json set_to_json(const apfree::IntegerSet& s) {
  json arr = json::array();
  for (const auto e : s.elements()) arr.push_back(e);
  return arr;
}

json mu_to_json(const apfree::ReciprocalSum& r, std::optional<int> p) {
  json j;
  j["mu_exact"] = r.exact ? json(r.exact->to_string()) : json(nullptr);
  j["mu_approx"] = r.approx;
  j["reference_p_log_p"] = p ? json(apfree::gerver_reference(*p)) : json(nullptr);
  j["log_base"] = "e";
  return j;
}

json mu_report(const apfree::IntegerSet& s, const apfree::ReciprocalSum& r,
               std::optional<int> p) {
  json j = mu_to_json(r, p);
  j["count"] = s.size();
  return j;
}

apfree::SequenceFile load_input(const std::string& path) {
  return apfree::load_sequence_file(path);
}

int resolve_p(std::optional<int> flag_p, const apfree::SequenceFile& file,
              const char* what) {
  if (flag_p) return *flag_p;
  if (file.p) return *file.p;
  throw CLI::ValidationError(std::string(what) +
                             ": --p not given and the file carries no p= metadata");
}

// ---------------------------------------------------------------------------
// gen
// ---------------------------------------------------------------------------

int run_gen(const CommonOpts& opts, int p, std::optional<std::uint64_t> count,
            std::optional<std::uint64_t> limit, bool with_mu, bool no_cache) {
  apfree::GreedyGenerator gen(p);

  const fs::path cache_file = apfree::greedy_cache_path(effective_cache_dir(opts), p);
  std::size_t cached_terms = 0;
  if (!no_cache && fs::exists(cache_file)) {
    try {
      const auto cached = apfree::load_sequence_file(cache_file);
      gen = apfree::GreedyGenerator::resume_from(p, cached.set);
      cached_terms = gen.count();
    } catch (const apfree::Error& e) {
      std::cerr << "warning: ignoring cache " << cache_file.string() << ": " << e.what()
                << "\n";
      gen = apfree::GreedyGenerator(p);
    }
  }

  const std::uint64_t target_count = count.value_or(0);
  std::uint64_t progress_step = 0;
  if (count && *count >= 20'000) progress_step = *count / 20;
  if (limit && *limit >= 1'000'000) progress_step = 10'000;
  if (limit) gen.reserve_up_to(*limit);
  while (true) {
    if (count && gen.count() >= *count) break;
    if (limit && gen.cursor() >= *limit) break;
    gen.next_term();
    if (progress_step && gen.count() % progress_step == 0) {
      std::cerr << "gen: " << gen.count() << " terms"
                << (count ? "/" + std::to_string(target_count) : "") << ", cursor "
                << gen.cursor() << "\n";
    }
  }

  std::vector<std::uint64_t> terms(gen.terms().begin(), gen.terms().end());
  if (count && terms.size() > *count) terms.resize(*count);
  if (limit)
    while (!terms.empty() && terms.back() > *limit) terms.pop_back();
  const apfree::IntegerSet result{terms};

  if (!no_cache && gen.count() > cached_terms) {
    std::error_code ec;
    fs::create_directories(cache_file.parent_path(), ec);
    try {
      apfree::save_sequence_file(cache_file, gen.snapshot(), p);
    } catch (const apfree::Error& e) {
      std::cerr << "warning: cache not written: " << e.what() << "\n";
    }
  }

  apfree::ReciprocalSum measured;
  if (with_mu) measured = apfree::mu(result);

  std::ofstream file;
  std::ostream& out = open_out(opts, file);
  switch (opts.fmt()) {
    case Format::text: {
      std::vector<std::string> comments;
      if (with_mu) {
        comments.push_back("mu_exact = " +
                           (measured.exact ? measured.exact->to_string() : "omitted"));
        comments.push_back("mu_approx = " + fmt(measured.approx));
        comments.push_back("reference_p_log_p = " + fmt(apfree::gerver_reference(p)));
        comments.push_back("log_base = e");
      }
      apfree::write_sequence_text(out, result, p, comments);
      break;
    }
    case Format::json: {
      json j;
      j["p"] = p;
      j["count"] = result.size();
      j["terms"] = set_to_json(result);
      if (with_mu) j["mu"] = mu_to_json(measured, p);
      out << j.dump() << "\n";
      break;
    }
    case Format::csv: {
      out << "n,term,mu_exact,mu_approx,reference_p_log_p\n";
      apfree::Rational running;
      double approx = 0.0;
      const double ref = apfree::gerver_reference(p);
      std::size_t n = 0;
      for (const auto e : result.elements()) {
        ++n;
        running += apfree::Rational::reciprocal_of(e);
        approx += 1.0 / static_cast<double>(e);
        out << n << "," << e << "," << running.to_string() << "," << fmt(approx) << ","
            << fmt(ref) << "\n";
      }
      break;
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

int run_verify(const CommonOpts& opts, std::optional<int> flag_p, const std::string& path) {
  const auto input = load_input(path);
  const int p = resolve_p(flag_p, input, "verify");
  const auto witness = apfree::find_ap_witness(input.set, p);

  std::ofstream file;
  std::ostream& out = open_out(opts, file);
  if (opts.fmt() == Format::json) {
    json j;
    j["file"] = path;
    j["p"] = p;
    j["count"] = input.set.size();
    j["ap_free"] = !witness.has_value();
    if (witness) {
      j["witness"] = {{"start", witness->start}, {"diff", witness->diff},
                      {"length", witness->length}};
    }
    out << j.dump() << "\n";
  } else if (witness) {
    out << "progression found: start=" << witness->start << " diff=" << witness->diff
        << " length=" << witness->length << "\n";
  } else {
    out << "AP-free (p=" << p << ", " << input.set.size() << " elements)\n";
  }
  return witness ? 1 : 0;
}

// ---------------------------------------------------------------------------
// mu
// ---------------------------------------------------------------------------

int run_mu(const CommonOpts& opts, std::optional<int> flag_p, const std::string& path,
           std::optional<std::uint64_t> from_index, std::uint64_t exact_cap) {
  const auto input = load_input(path);
  std::optional<int> p = flag_p ? flag_p : input.p;
  const auto r = from_index ? apfree::mu_tail(input.set, *from_index, exact_cap)
                            : apfree::mu(input.set, exact_cap);

  std::ofstream file;
  std::ostream& out = open_out(opts, file);
  if (opts.fmt() == Format::text) {
    out << "count " << input.set.size() << "\n";
    if (from_index) out << "from_index " << *from_index << "\n";
    out << "mu_exact " << (r.exact ? r.exact->to_string() : "omitted") << "\n";
    out << "mu_approx " << fmt(r.approx) << "\n";
    if (p)
      out << "reference_p_log_p " << fmt(apfree::gerver_reference(*p)) << " (log base e)\n";
  } else {
    json j = mu_report(input.set, r, p);
    if (from_index) j["from_index"] = *from_index;
    out << j.dump() << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// amplify
// ---------------------------------------------------------------------------

json amplifier_search_json(const apfree::AmplifierSearch& s) {
  json j;
  switch (s.outcome) {
    case apfree::AmplifierSearch::Outcome::found:
      j["outcome"] = "found";
      break;
    case apfree::AmplifierSearch::Outcome::budget_exhausted:
      j["outcome"] = "budget_exhausted";
      break;
    case apfree::AmplifierSearch::Outcome::ceiling_infeasible:
      j["outcome"] = "ceiling_infeasible";
      break;
  }
  j["required_mu"] = s.required;
  j["budget"] = s.budget;
  j["harmonic_ceiling"] = s.ceiling;
  j["achieved_mu"] = s.achieved_mu.to_string();
  if (s.amplifier) j["amplifier"] = set_to_json(*s.amplifier);
  return j;
}

json amplify_report_json(const apfree::AmplifyReport& rep) {
  json j;
  j["base"] = set_to_json(rep.base);
  j["amplifier"] = set_to_json(rep.amplifier);
  j["scale"] = rep.scale;
  j["result"] = set_to_json(rep.result);
  j["mu_base"] = rep.mu_base.to_string();
  j["mu_result"] = rep.mu_result.to_string();
  j["ap_free_verified"] = true;
  return j;
}

int run_amplify(const CommonOpts& opts, int p, const std::string& base_path,
                const std::string& amp_path, std::uint64_t budget) {
  const auto base = load_input(base_path);

  apfree::IntegerSet amplifier;
  std::optional<apfree::AmplifierSearch> search;
  if (!amp_path.empty()) {
    amplifier = load_input(amp_path).set;
  } else {
    search = apfree::find_amplifier(p, base.set.max(), budget);
    if (!search->found()) {
      std::ofstream file;
      std::ostream& out = open_out(opts, file);
      if (opts.fmt() == Format::json) {
        out << amplifier_search_json(*search).dump() << "\n";
      } else {
        out << "no amplifier within budget " << budget << ": required mu "
            << search->required << ", harmonic ceiling " << fmt(search->ceiling) << "\n";
      }
      return 1;
    }
    amplifier = *search->amplifier;
  }

  const auto rep = apfree::amplify(base.set, amplifier, p);
  std::ofstream file;
  std::ostream& out = open_out(opts, file);
  if (opts.fmt() == Format::json) {
    json j = amplify_report_json(rep);
    if (search) j["search"] = amplifier_search_json(*search);
    out << j.dump() << "\n";
  } else {
    out << "base      " << rep.base.to_string() << "\n";
    out << "amplifier " << rep.amplifier.to_string() << "\n";
    out << "scale     " << rep.scale << "\n";
    out << "result    " << rep.result.to_string() << "\n";
    out << "mu        " << rep.mu_base.to_string() << " -> " << rep.mu_result.to_string()
        << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// partition
// ---------------------------------------------------------------------------

int run_partition(const CommonOpts& opts, const std::string& path, std::uint64_t m,
                  std::optional<int> p, const std::string& a1_path) {
  const auto input = load_input(path);
  const auto parts = apfree::block_partition(input.set, m);
  const auto chosen = apfree::pigeonhole_part(input.set, m);

  std::optional<apfree::IntegerSet> joined;
  if (!a1_path.empty()) {
    const auto a1 = load_input(a1_path);
    const int pp = resolve_p(p, a1, "partition --a1-file");
    joined = apfree::pigeonhole_join(a1.set, input.set, m, pp);
  }

  std::ofstream file;
  std::ostream& out = open_out(opts, file);
  if (opts.fmt() == Format::json) {
    json j;
    j["m"] = m;
    for (int k = 1; k <= 4; ++k) {
      json part;
      part["elements"] = set_to_json(parts.part(k));
      part["mu_exact"] = apfree::exact_reciprocal_sum(parts.part(k).elements()).to_string();
      j["parts"].push_back(part);
    }
    json blocks = json::array();
    for (const auto& [x, b] : parts.block_map)
      blocks.push_back({{"element", x}, {"j", b.j}, {"i", b.i}});
    j["block_map"] = blocks;
    j["pigeonhole_j"] = chosen.j;
    j["pigeonhole_mu"] = chosen.part_mu.to_string();
    j["total_mu"] = chosen.total_mu.to_string();
    if (joined) {
      j["join"] = set_to_json(*joined);
      j["join_ap_free_verified"] = true;
    }
    out << j.dump() << "\n";
  } else {
    out << "m = " << m << ", total mu = " << chosen.total_mu.to_string() << "\n";
    for (int k = 1; k <= 4; ++k) {
      out << "R_" << k << " " << parts.part(k).to_string() << " mu = "
          << apfree::exact_reciprocal_sum(parts.part(k).elements()).to_string() << "\n";
    }
    out << "pigeonhole part: j = " << chosen.j << " with mu " << chosen.part_mu.to_string()
        << "\n";
    if (joined) out << "join " << joined->to_string() << " (verified AP-free)\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// search
// ---------------------------------------------------------------------------

int run_search(const CommonOpts& opts, std::uint64_t n, int p, const std::string& method,
               bool compare_greedy) {
  const apfree::SearchMethod m = method == "exhaustive"
                                     ? apfree::SearchMethod::exhaustive
                                     : apfree::SearchMethod::branch_and_bound;
  const auto t0 = std::chrono::steady_clock::now();
  const auto result = apfree::max_mu_subset(n, p, m, opts.jobs);
  const auto t1 = std::chrono::steady_clock::now();
  const double wall_ms =
      std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(t1 - t0).count();

  std::ofstream file;
  std::ostream& out = open_out(opts, file);
  if (opts.fmt() == Format::json) {
    json j;
    j["n"] = n;
    j["p"] = p;
    j["method"] = apfree::to_string(result.method);
    j["best_set"] = set_to_json(result.best_set);
    j["best_mu_exact"] = result.best_mu.to_string();
    j["best_mu_approx"] = result.best_mu.to_double();
    j["nodes_explored"] = result.nodes_explored;
    j["proven_optimal"] = result.proven_optimal;
    j["wall_ms"] = wall_ms;
    j["jobs"] = opts.jobs;
    if (compare_greedy) {
      const auto greedy = apfree::generate_up_to(p, n);
      const auto greedy_mu = apfree::exact_reciprocal_sum(greedy.elements());
      j["greedy_set"] = set_to_json(greedy);
      j["greedy_mu_exact"] = greedy_mu.to_string();
      j["mu_gap_exact"] = (result.best_mu - greedy_mu).to_string();
      j["greedy_is_optimal"] = result.best_mu == greedy_mu;
    }
    out << j.dump() << "\n";
  } else {
    out << "best set " << result.best_set.to_string() << "\n";
    out << "mu " << result.best_mu.to_string() << " ~ " << fmt(result.best_mu.to_double())
        << "\n";
    out << "nodes " << result.nodes_explored << ", " << apfree::to_string(result.method)
        << ", proven optimal, " << wall_ms << " ms\n";
    if (compare_greedy) {
      const auto greedy = apfree::generate_up_to(p, n);
      const auto greedy_mu = apfree::exact_reciprocal_sum(greedy.elements());
      out << "greedy " << greedy.to_string() << " mu " << greedy_mu.to_string()
          << (greedy_mu == result.best_mu ? " (optimal)" : " (not optimal)") << "\n";
      out << "gap " << (result.best_mu - greedy_mu).to_string() << "\n";
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// converge
// ---------------------------------------------------------------------------

struct Manifest {
  fs::path limit_path;
  std::vector<fs::path> member_paths;
};

Manifest parse_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw apfree::IoError("cannot open " + path.string());
  Manifest m;
  std::string line;
  std::size_t lineno = 0;
  const fs::path base = path.parent_path();
  while (std::getline(in, line)) {
    ++lineno;
    std::string body = line;
    while (!body.empty() && (body.back() == '\r' || body.back() == ' ')) body.pop_back();
    std::size_t start = body.find_first_not_of(" \t");
    if (start == std::string::npos || body[start] == '#') continue;
    body = body.substr(start);
    if (body.starts_with("limit ")) {
      m.limit_path = base / body.substr(6);
    } else if (body.starts_with("member ")) {
      m.member_paths.push_back(base / body.substr(7));
    } else {
      throw apfree::ParseError(path.string(), lineno,
                               "expected 'limit <path>' or 'member <path>'");
    }
  }
  if (m.limit_path.empty())
    throw apfree::ParseError(path.string(), 0, "manifest names no limit file");
  if (m.member_paths.empty())
    throw apfree::ParseError(path.string(), 0, "manifest names no member files");
  return m;
}

int run_converge(const CommonOpts& opts, const std::string& manifest_path,
                 std::uint64_t window, std::optional<int> p,
                 const std::string& epsilon, std::optional<std::uint64_t> horizon_flag) {
  const Manifest manifest = parse_manifest(manifest_path);
  const auto limit_file = apfree::load_sequence_file(manifest.limit_path);
  apfree::SetSequence seq;
  std::uint64_t top = limit_file.set.max();
  for (const auto& mp : manifest.member_paths) {
    const auto member = apfree::load_sequence_file(mp);
    top = std::max(top, member.set.max());
    seq.push_back(apfree::DescribedSet::exact(member.set));
  }
  const auto limit = apfree::DescribedSet::exact(limit_file.set);
  const std::uint64_t horizon = horizon_flag.value_or(std::max(window, top + 1));

  json j;
  j["manifest"] = manifest_path;
  j["members"] = manifest.member_paths.size();
  j["window"] = window;

  const auto conv = apfree::convergence_index(seq, limit, window);
  j["convergence_index"] = conv ? json(*conv) : json(nullptr);
  j["converged"] = conv.has_value();

  // Diagnostic metric distance between the last member and the limit.
  if (!seq.empty()) {
    const auto disagree = apfree::first_disagreement(seq.back(), limit, window);
    j["last_member_first_disagreement"] = disagree ? json(*disagree) : json(nullptr);
    j["last_member_metric_distance"] =
        disagree ? std::ldexp(1.0, -static_cast<int>(std::min<std::uint64_t>(*disagree, 1024)))
                 : 0.0;
  }

  if (p) {
    const auto verdict = apfree::closedness_check(seq, limit, *p, window);
    j["closedness"] = {{"pass", verdict.pass},
                       {"window", verdict.window},
                       {"convergence_at", verdict.convergence_at}};
    if (verdict.witness)
      j["closedness"]["witness"] = {{"start", verdict.witness->start},
                                    {"diff", verdict.witness->diff},
                                    {"length", verdict.witness->length}};
  }

  if (!epsilon.empty()) {
    const auto eps = apfree::Rational::parse(epsilon);
    const auto rep = apfree::continuity_check(seq, limit, eps, horizon);
    const char* status = "ok";
    switch (rep.status) {
      case apfree::ContinuityReport::Status::ok:
        status = "ok";
        break;
      case apfree::ContinuityReport::Status::deviation_exceeded:
        status = "deviation_exceeded";
        break;
      case apfree::ContinuityReport::Status::not_converged:
        status = "not_converged";
        break;
      case apfree::ContinuityReport::Status::tail_not_small:
        status = "tail_not_small";
        break;
    }
    j["continuity"] = {{"status", status},
                       {"epsilon", eps.to_string()},
                       {"tail_start", rep.tail_start},
                       {"agreement_prefix", rep.agreement_prefix},
                       {"convergence_at", rep.convergence_at},
                       {"max_deviation", rep.max_deviation.to_string()},
                       {"tail_bound", rep.tail_bound.to_string()},
                       {"deviation_within_bound", rep.deviation_within_bound}};
  }

  std::ofstream file;
  std::ostream& out = open_out(opts, file);
  if (opts.fmt() == Format::json) {
    out << j.dump() << "\n";
  } else {
    out << "members: " << manifest.member_paths.size() << ", window: " << window << "\n";
    if (conv)
      out << "converged from member " << *conv << "\n";
    else
      out << "not converged at this horizon\n";
    if (j.contains("closedness"))
      out << "closedness: " << (j["closedness"]["pass"].get<bool>() ? "pass" : "FAIL") << "\n";
    if (j.contains("continuity"))
      out << "continuity: " << j["continuity"]["status"].get<std::string>()
          << ", max deviation " << j["continuity"]["max_deviation"].get<std::string>() << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// bootstrap
// ---------------------------------------------------------------------------

int run_bootstrap(const CommonOpts& opts, int p, std::uint64_t steps, std::uint64_t budget) {
  const auto run = apfree::bootstrap(p, steps, budget);

  std::ofstream file;
  std::ostream& out = open_out(opts, file);
  if (opts.fmt() == Format::json) {
    for (std::size_t i = 0; i < run.steps.size(); ++i) {
      json j = amplify_report_json(run.steps[i]);
      j["step"] = i + 1;
      out << j.dump() << "\n";
    }
    json tail;
    tail["requested_steps"] = run.requested_steps;
    tail["completed_steps"] = run.steps.size();
    tail["budget_exhausted"] = run.budget_exhausted();
    if (run.failure) {
      tail["failed_step"] = run.failed_step;
      tail["certificate"] = amplifier_search_json(*run.failure);
    }
    tail["final_set"] = set_to_json(run.final_set());
    tail["final_mu"] =
        apfree::exact_reciprocal_sum(run.final_set().elements()).to_string();
    out << tail.dump() << "\n";
  } else {
    out << "A_0 = " << run.initial.to_string() << "\n";
    for (std::size_t i = 0; i < run.steps.size(); ++i) {
      const auto& rep = run.steps[i];
      out << "step " << i + 1 << ": amplifier " << rep.amplifier.to_string() << ", scale "
          << rep.scale << "\n";
      out << "  A_" << i + 1 << " = " << rep.result.to_string() << ", mu = "
          << rep.mu_result.to_string() << "\n";
    }
    if (run.budget_exhausted()) {
      const auto& f = *run.failure;
      out << "halted: BudgetExhausted at step " << run.failed_step << " (required mu "
          << f.required << ", ";
      if (f.outcome == apfree::AmplifierSearch::Outcome::ceiling_infeasible)
        out << "harmonic ceiling H_" << f.budget << " <= " << fmt(f.ceiling) << " < "
            << f.required << ")\n";
      else
        out << "greedy prefix exhausted budget " << f.budget << " at mu "
            << f.achieved_mu.to_string() << ")\n";
    } else {
      out << "completed " << run.steps.size() << " steps\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"progression-free sets: greedy generation, reciprocal-sum "
               "measurement, constructions, and exact search"};
  app.require_subcommand(1);

  CommonOpts common;
  app.add_option("--format", common.format, "output format")
      ->check(CLI::IsMember({"text", "json", "csv"}))
      ->capture_default_str();
  app.add_option("--out", common.out_path, "write the report here instead of stdout");
  app.add_option("--cache-dir", common.cache_dir,
                 "greedy cache directory (default $APFREE_CACHE or ./.apfree-cache)");
  app.add_option("--jobs", common.jobs, "worker threads where supported")
      ->check(CLI::Range(1U, 256U));
  app.add_option("--seed", common.seed, "seed echoed to randomized harnesses");

  // gen
  auto* gen = app.add_subcommand("gen", "generate the greedy sequence");
  gen->fallthrough();
  int gen_p = 0;
  std::optional<std::uint64_t> gen_count, gen_limit;
  bool gen_with_mu = false, gen_no_cache = false;
  gen->add_option("--p", gen_p, "progression length to avoid")->required()->check(CLI::Range(3, 1000000));
  gen->add_option("--count", gen_count, "number of terms");
  gen->add_option("--limit", gen_limit, "largest admissible term");
  gen->add_flag("--with-mu", gen_with_mu, "append reciprocal-sum info");
  gen->add_flag("--no-cache", gen_no_cache, "skip the sequence cache");

  // verify
  auto* verify = app.add_subcommand("verify", "scan a sequence file for progressions");
  verify->fallthrough();
  std::optional<int> verify_p;
  std::string verify_file;
  verify->add_option("--p", verify_p, "progression length")->check(CLI::Range(3, 1000000));
  verify->add_option("--file", verify_file, "sequence file")->required();

  // mu
  auto* mu_cmd = app.add_subcommand("mu", "reciprocal sum of a sequence file");
  mu_cmd->fallthrough();
  std::optional<int> mu_p;
  std::string mu_file;
  std::optional<std::uint64_t> mu_from;
  std::uint64_t mu_cap = apfree::default_exact_cap;
  mu_cmd->add_option("--p", mu_p, "p for the reference level")->check(CLI::Range(3, 1000000));
  mu_cmd->add_option("--file", mu_file, "sequence file")->required();
  mu_cmd->add_option("--from-index", mu_from, "1-based start of a tail sum");
  mu_cmd->add_option("--exact-cap", mu_cap, "max elements for exact arithmetic");

  // amplify
  auto* amp = app.add_subcommand("amplify", "scale-and-join amplification");
  amp->fallthrough();
  int amp_p = 0;
  std::string amp_base, amp_amp;
  std::uint64_t amp_budget = 1'000'000;
  amp->add_option("--p", amp_p, "progression length")->required()->check(CLI::Range(3, 1000000));
  amp->add_option("--file", amp_base, "base set file")->required();
  amp->add_option("--amplifier-file", amp_amp, "explicit amplifier (skips the search)");
  amp->add_option("--budget", amp_budget, "largest term the amplifier search may use");

  // partition
  auto* part = app.add_subcommand("partition", "four-way interval partition");
  part->fallthrough();
  std::string part_file, part_a1;
  std::uint64_t part_m = 0;
  std::optional<int> part_p;
  part->add_option("--file", part_file, "set to partition")->required();
  part->add_option("--m", part_m, "partition modulus M")->required()->check(CLI::PositiveNumber);
  part->add_option("--p", part_p, "progression length; required with --a1-file")
      ->check(CLI::Range(3, 1000000));
  part->add_option("--a1-file", part_a1, "left set to join with the pigeonhole part");

  // search
  auto* srch = app.add_subcommand("search", "exact reciprocal-sum maximization on [1, N]");
  srch->fallthrough();
  std::uint64_t srch_n = 0;
  int srch_p = 0;
  std::string srch_method = "bnb";
  bool srch_compare = false;
  srch->add_option("--n", srch_n, "range upper end")->required()->check(CLI::PositiveNumber);
  srch->add_option("--p", srch_p, "progression length")->required()->check(CLI::Range(3, 1000000));
  srch->add_option("--method", srch_method, "exhaustive or bnb")
      ->check(CLI::IsMember({"exhaustive", "bnb"}))
      ->capture_default_str();
  srch->add_flag("--compare-greedy", srch_compare, "include the greedy comparison");

  // converge
  auto* conv = app.add_subcommand("converge", "convergence checks from a manifest");
  conv->fallthrough();
  std::string conv_manifest, conv_epsilon;
  std::uint64_t conv_window = 0;
  std::optional<int> conv_p;
  std::optional<std::uint64_t> conv_horizon;
  conv->add_option("--file", conv_manifest, "manifest: 'limit <path>' and 'member <path>' lines")
      ->required();
  conv->add_option("--window", conv_window, "prefix length k")->required()->check(CLI::PositiveNumber);
  conv->add_option("--p", conv_p, "run the closedness check")->check(CLI::Range(3, 1000000));
  conv->add_option("--epsilon", conv_epsilon, "run the continuity check at this epsilon");
  conv->add_option("--horizon", conv_horizon, "bit horizon for the continuity schedule");

  // bootstrap
  auto* boot = app.add_subcommand("bootstrap", "iterate the amplifier from {1}");
  boot->fallthrough();
  int boot_p = 0;
  std::uint64_t boot_steps = 0, boot_budget = 0;
  boot->add_option("--p", boot_p, "progression length")->required()->check(CLI::Range(3, 1000000));
  boot->add_option("--steps,--count", boot_steps, "amplification steps to attempt")->required();
  boot->add_option("--budget", boot_budget, "largest term amplifiers may use")
      ->required()
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);

    // Report-style subcommands default to JSON; gen emits the sequence text
    // format and verify a human verdict unless asked otherwise.
    if (app.count("--format") == 0 &&
        (mu_cmd->parsed() || amp->parsed() || part->parsed() || srch->parsed() ||
         conv->parsed() || boot->parsed()))
      common.format = "json";

    if (gen->parsed()) {
      if (!gen_count.has_value() && !gen_limit.has_value())
        throw CLI::ValidationError("gen: one of --count or --limit is required");
      if (gen_count.has_value() && *gen_count == 0)
        throw CLI::ValidationError("gen: --count must be >= 1");
      return run_gen(common, gen_p, gen_count, gen_limit, gen_with_mu, gen_no_cache);
    }
    if (verify->parsed()) return run_verify(common, verify_p, verify_file);
    if (mu_cmd->parsed()) return run_mu(common, mu_p, mu_file, mu_from, mu_cap);
    if (amp->parsed()) return run_amplify(common, amp_p, amp_base, amp_amp, amp_budget);
    if (part->parsed()) return run_partition(common, part_file, part_m, part_p, part_a1);
    if (srch->parsed()) return run_search(common, srch_n, srch_p, srch_method, srch_compare);
    if (conv->parsed())
      return run_converge(common, conv_manifest, conv_window, conv_p, conv_epsilon,
                          conv_horizon);
    if (boot->parsed()) return run_bootstrap(common, boot_p, boot_steps, boot_budget);
    return 2;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const apfree::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const apfree::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const apfree::ClaimViolated& e) {
    std::cerr << "CLAIM VIOLATED: " << e.what() << "\n";
    return 1;
  } catch (const apfree::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
