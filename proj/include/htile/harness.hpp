#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "htile/constructions.hpp"
#include "htile/error.hpp"
#include "htile/fractional.hpp"
#include "htile/graph.hpp"
#include "htile/graph_io.hpp"
#include "htile/params.hpp"
#include "htile/patterns.hpp"
#include "htile/rational.hpp"
#include "htile/tiling.hpp"

namespace htile {

struct CampaignConfig {
  Graph h;
  std::vector<std::size_t> r_values{3};
  std::vector<std::size_t> n_values;
  std::vector<Rational> alphas;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  std::size_t column_cap = FractionalOptions{}.column_cap;
  std::uint64_t node_budget = 1'000'000;
  double time_limit_seconds = 30.0;
  double extra_edge_p = 0.2;
  std::optional<Rational> a;  // overrides for the Lemma campaign
  std::optional<Rational> b;
  std::optional<std::string> output;
  std::size_t threads = 1;
};

enum class Outcome { Feasible, Infeasible, Tiled, Untiled, Unknown };

inline const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Feasible: return "feasible";
    case Outcome::Infeasible: return "infeasible";
    case Outcome::Tiled: return "tiled";
    case Outcome::Untiled: return "untiled";
    case Outcome::Unknown: return "unknown";
  }
  return "unknown";
}

struct TrialRecord {
  std::size_t index = 0;
  std::size_t r = 0;
  std::size_t n = 0;
  std::size_t delta_star = 0;
  Rational threshold;  // the real-valued degree bound
  std::size_t degree_target = 0;  // its ceiling
  Outcome outcome = Outcome::Unknown;
  std::uint64_t work = 0;  // simplex pivots or search nodes
  double wall_seconds = 0;  // kept out of every serialised output
};

// ---------------------------------------------------------------------------
// Config, seeding, CSV

namespace detail {

inline std::vector<std::size_t> read_size_list(const json& node, const std::string& key) {
  std::vector<std::size_t> out;
  if (node.is_array()) {
    for (const auto& x : node) {
      if (!x.is_number_unsigned()) throw ParseError(key + ": expected non-negative integers");
      out.push_back(x.get<std::size_t>());
    }
  } else if (node.is_object()) {
    if (!node.contains("min") || !node.contains("max")) throw ParseError(key + ": range needs min and max");
    auto lo = node.at("min").get<std::size_t>(), hi = node.at("max").get<std::size_t>();
    for (auto v = lo; v <= hi; ++v) out.push_back(v);
  } else if (node.is_number_unsigned()) {
    out.push_back(node.get<std::size_t>());
  } else {
    throw ParseError(key + ": expected an integer, a list or {min, max}");
  }
  return out;
}

inline Rational read_rational(const json& node, const std::string& key) {
  if (node.is_string()) return parse_rational(node.get<std::string>());
  if (node.is_number_integer()) return Rational(node.get<long>());
  throw ParseError(key + ": expected a rational string \"p/q\" or an integer");
}

}  // namespace detail

// Keys: h_file (relative to base_dir) or inline h; r; n; alpha; trials; seed;
// columns_cap; budget; time_limit_s; extra_edge_p; a; b; output; threads.
inline CampaignConfig parse_campaign_config(const std::string& text, const std::filesystem::path& base_dir = {}) {
  json doc = detail::parse_document(text);
  if (!doc.is_object()) throw ParseError("config must be a JSON object");
  static const std::vector<std::string> known = {"h_file", "h",     "r",      "n",  "alpha",  "trials",
                                                 "seed",   "columns_cap", "budget", "time_limit_s",
                                                 "extra_edge_p", "a", "b", "output", "threads"};
  for (const auto& [key, value] : doc.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) throw ParseError("config: unknown key '" + key + "'");
  }
  CampaignConfig cfg;
  try {
    if (doc.contains("h")) {
      cfg.h = graph_from_json(doc["h"]);
    } else if (doc.contains("h_file")) {
      std::filesystem::path p = doc["h_file"].get<std::string>();
      if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
      cfg.h = parse_graph(read_text(p.string()));
    } else {
      throw ParseError("config: one of 'h' or 'h_file' is required");
    }
    if (doc.contains("r")) cfg.r_values = detail::read_size_list(doc["r"], "r");
    if (doc.contains("n")) cfg.n_values = detail::read_size_list(doc["n"], "n");
    if (doc.contains("alpha")) {
      const json& alphas = doc["alpha"];
      if (!alphas.is_array()) throw ParseError("alpha: expected a list");
      for (const auto& x : alphas) cfg.alphas.push_back(detail::read_rational(x, "alpha"));
    }
    if (doc.contains("trials")) cfg.trials = doc["trials"].get<std::size_t>();
    if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("columns_cap")) cfg.column_cap = doc["columns_cap"].get<std::size_t>();
    if (doc.contains("budget")) cfg.node_budget = doc["budget"].get<std::uint64_t>();
    if (doc.contains("time_limit_s")) cfg.time_limit_seconds = doc["time_limit_s"].get<double>();
    if (doc.contains("extra_edge_p")) cfg.extra_edge_p = doc["extra_edge_p"].get<double>();
    if (doc.contains("a")) cfg.a = detail::read_rational(doc["a"], "a");
    if (doc.contains("b")) cfg.b = detail::read_rational(doc["b"], "b");
    if (doc.contains("output")) cfg.output = doc["output"].get<std::string>();
    if (doc.contains("threads")) cfg.threads = doc["threads"].get<std::size_t>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  if (cfg.trials < 1) throw ParseError("trials: must be at least 1");
  if (cfg.n_values.empty()) throw ParseError("config: 'n' is required");
  return cfg;
}

// Independent 64-bit seed for (campaign seed, stream, index); the same for
// serial and parallel runs.
inline std::uint64_t trial_seed(std::uint64_t campaign_seed, std::uint64_t stream, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(campaign_seed), static_cast<std::uint32_t>(campaign_seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

// Runs fn(0..count-1) on up to `threads` workers; results come back in index order.
template <typename Result>
std::vector<Result> run_indexed(std::size_t count, std::size_t threads, const std::function<Result(std::size_t)>& fn) {
  std::vector<Result> results(count);
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) results[i] = fn(i);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = next++; i < count; i = next++) results[i] = fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string csv_row(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) line += ',';
    line += csv_field(fields[i]);
  }
  return line + "\r\n";
}

// ---------------------------------------------------------------------------
// Lemma campaign

struct LemmaReport {
  Rational a;
  Rational b;
  std::vector<TrialRecord> records;
  std::size_t feasible = 0;
  std::size_t infeasible = 0;
  std::vector<std::string> failures;  // offending hosts, serialised for replay

  bool passed() const { return infeasible == 0; }
  std::string csv() const {
    std::string out = csv_row({"trial", "r", "n", "delta_star", "threshold", "degree_target", "outcome", "pivots"});
    for (const auto& t : records) {
      out += csv_row({std::to_string(t.index), std::to_string(t.r), std::to_string(t.n), std::to_string(t.delta_star),
                      to_string(t.threshold), std::to_string(t.degree_target), htile::to_string(t.outcome),
                      std::to_string(t.work)});
    }
    return out;
  }
  json summary() const {
    return {{"campaign", "lemma"}, {"a", to_string(a)}, {"b", to_string(b)}, {"trials", records.size()},
            {"feasible", feasible}, {"infeasible", infeasible}, {"passed", passed()}};
  }
};

// Degree bound (1 - b/h) n with h := a + (r - 1) b.
inline Rational lemma_threshold(const Rational& a, const Rational& b, std::size_t r, std::size_t n) {
  Rational h = a + b * static_cast<long>(r - 1);
  Rational t = (Rational(1) - b / h) * static_cast<long>(n);
  t.canonicalize();
  return t;
}

// Trial t uses r = r_values[t mod |r|] and n = n_values[(t / |r|) mod |n|].
inline LemmaReport verify_lemma_campaign(const CampaignConfig& cfg) {
  LemmaReport report;
  if (cfg.a && cfg.b) {
    report.a = *cfg.a;
    report.b = *cfg.b;
  } else {
    ChromaticProfile p = chromatic_profile(cfg.h);
    report.a = cfg.a.value_or(p.a);
    report.b = cfg.b.value_or(p.b);
  }
  detail::require(report.a > 0 && report.a <= report.b, "Lemma campaign needs 0 < a <= b");
  for (auto r : cfg.r_values) detail::require(r >= 3, "Lemma campaign needs r >= 3");
  detail::require(!cfg.r_values.empty(), "Lemma campaign needs at least one r");

  struct Result {
    TrialRecord record;
    std::string failure;
  };
  FractionalOptions opts;
  opts.column_cap = cfg.column_cap;
  auto results = run_indexed<Result>(cfg.trials, cfg.threads, [&](std::size_t t) {
    auto started = std::chrono::steady_clock::now();
    Result res;
    TrialRecord& rec = res.record;
    rec.index = t;
    rec.r = cfg.r_values[t % cfg.r_values.size()];
    rec.n = cfg.n_values[(t / cfg.r_values.size()) % cfg.n_values.size()];
    rec.threshold = lemma_threshold(report.a, report.b, rec.r, rec.n);
    rec.degree_target = static_cast<std::size_t>(std::max(0L, ceil_to_long(rec.threshold)));
    MultipartiteGraph g = random_partite_graph(rec.r, rec.n, rec.degree_target, trial_seed(cfg.seed, 1, t),
                                               cfg.extra_edge_p);
    rec.delta_star = min_multipartite_degree(g);
    WeightedTilingSolution sol = solve_perfect_weighted_tiling(g, report.a, report.b, opts);
    rec.work = sol.pivots;
    rec.outcome = sol.feasible() ? Outcome::Feasible : Outcome::Infeasible;
    if (!sol.feasible()) res.failure = serialize(g);
    rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return res;
  });
  for (auto& res : results) {
    (res.record.outcome == Outcome::Feasible ? report.feasible : report.infeasible) += 1;
    if (!res.failure.empty()) report.failures.push_back(std::move(res.failure));
    report.records.push_back(res.record);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Lower-bound certification

struct CertifyReport {
  std::string family;  // "gcd" or "sigma"
  std::size_t r = 0;
  std::size_t n = 0;
  std::size_t h = 0;
  ConstructionSpec spec;
  std::size_t delta_star = 0;
  Rational threshold;  // (1 - 1/chi*(H)) n - 1
  std::size_t perfect_size = 0;  // rn / h
  std::optional<std::size_t> row_bound;  // sigma family
  std::optional<long> row_difference;  // gcd family: |V^1| - |V^2|
  std::string search;  // search verdict
  std::optional<std::size_t> max_tiling;
  std::uint64_t nodes = 0;
  bool certified = false;
  std::string verdict;  // certified | inconclusive | refuted
  std::vector<std::string> notes;

  json to_json() const {
    json blocks = spec.block_sizes;
    json out = {{"family", family},
                {"r", r},
                {"n", n},
                {"h", h},
                {"blocks", blocks},
                {"delta_star", delta_star},
                {"threshold", to_string(threshold)},
                {"perfect_size", perfect_size},
                {"search", search},
                {"nodes", nodes},
                {"certified", certified},
                {"verdict", verdict},
                {"notes", notes}};
    out["row_bound"] = row_bound ? json(*row_bound) : json(nullptr);
    out["row_difference"] = row_difference ? json(*row_difference) : json(nullptr);
    out["max_tiling"] = max_tiling ? json(*max_tiling) : json(nullptr);
    return out;
  }
};

// Builds the matching lower-bound host for H and proves (or fails to prove)
// that it has no perfect H-tiling. Only an exact NoneExists, or an optimal
// maximum tiling below rn/h, certifies.
inline CertifyReport certify_lower_bound(const Graph& h, std::size_t n, const SearchOptions& base_opts = {}) {
  const ChromaticProfile p = chromatic_profile(h);
  detail::require(p.r >= 3, "certification needs chi(H) >= 3");
  detail::require(!p.gcd.is_infinite(), "gcd(H) is infinite: neither lower-bound family applies");
  CertifyReport rep;
  rep.r = p.r;
  rep.n = n;
  rep.h = p.h;
  const bool gcd_family = p.gcd.value() > 1;
  rep.family = gcd_family ? "gcd" : "sigma";
  rep.spec = gcd_family ? gcd_lower_bound_spec(h, n) : sigma_lower_bound_spec(h, n);
  BlockConstruction host = build_block_construction(rep.spec);
  rep.delta_star = min_multipartite_degree(host.graph);
  rep.threshold = (Rational(1) - Rational(1) / p.chi_star) * static_cast<long>(n) - 1;
  rep.threshold.canonicalize();
  rep.perfect_size = p.r * n / p.h;

  const bool rn_divisible = (p.r * n) % p.h == 0;
  const bool n_divisible = n % p.h == 0;
  if (gcd_family && rn_divisible && !n_divisible) {
    rep.notes.push_back("h divides rn but not n; perfect tilings for gcd(H) > 1 are only claimed when h | n");
  }
  const bool divisible = gcd_family ? n_divisible : rn_divisible;
  if (!divisible) {
    rep.search = "skipped";
    rep.verdict = "inconclusive";
    rep.notes.push_back(gcd_family ? "h does not divide n" : "h does not divide rn");
    return rep;
  }

  SearchOptions opts = base_opts;
  opts.blocks = host.blocks;
  if (gcd_family) {
    rep.row_difference = static_cast<long>(host.blocks.row_size(0)) - static_cast<long>(host.blocks.row_size(1));
    PerfectTilingResult res = perfect_H_tiling(host.graph, h, opts);
    rep.search = to_string(res.status);
    rep.nodes = res.nodes;
    rep.certified = res.status == SearchStatus::NoneExists;
    rep.verdict = rep.certified ? "certified" : res.status == SearchStatus::Unknown ? "inconclusive" : "refuted";
  } else {
    rep.row_bound = row_tiling_upper_bound(host.blocks, h);
    MaxTilingResult res = max_H_tiling(host.graph, h, opts);
    rep.max_tiling = res.tiling.size();
    rep.nodes = res.nodes;
    rep.search = res.optimal ? "optimal" : "unknown";
    if (!res.optimal) {
      rep.verdict = "inconclusive";
    } else {
      rep.certified = res.tiling.size() < rep.perfect_size;
      rep.verdict = rep.certified ? "certified" : "refuted";
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Threshold sweep

struct SweepCell {
  std::size_t n = 0;
  Rational alpha;
  std::size_t trials = 0;
  std::size_t tiled = 0;
  std::size_t untiled = 0;
  std::size_t unknown = 0;
  std::uint64_t total_nodes = 0;
};

struct SweepReport {
  std::vector<SweepCell> cells;
  std::vector<std::string> skipped;

  std::string csv() const {
    std::string out = csv_row({"n", "alpha", "trials", "tiled", "untiled", "unknown", "mean_nodes"});
    for (const auto& c : cells) {
      char mean[64];
      std::snprintf(mean, sizeof mean, "%.2f",
                    c.trials ? static_cast<double>(c.total_nodes) / static_cast<double>(c.trials) : 0.0);
      out += csv_row({std::to_string(c.n), to_string(c.alpha), std::to_string(c.trials), std::to_string(c.tiled),
                      std::to_string(c.untiled), std::to_string(c.unknown), mean});
    }
    return out;
  }
  json summary() const {
    std::size_t unknown = 0;
    for (const auto& c : cells) unknown += c.unknown;
    return {{"campaign", "sweep"}, {"cells", cells.size()}, {"skipped", skipped}, {"unknown", unknown}};
  }
};

// Degree target ceil((1 - 1/chi*(H) + alpha) n).
inline Rational sweep_threshold_value(const ChromaticProfile& p, const Rational& alpha, std::size_t n) {
  Rational t = (Rational(1) - Rational(1) / p.chi_star + alpha) * static_cast<long>(n);
  t.canonicalize();
  return t;
}

inline SweepReport sweep_threshold(const CampaignConfig& cfg) {
  const ChromaticProfile p = chromatic_profile(cfg.h);
  SweepReport report;
  struct Job {
    std::size_t cell;
    std::size_t trial;
    std::size_t target;
  };
  std::vector<Job> jobs;
  for (std::size_t ni = 0; ni < cfg.n_values.size(); ++ni) {
    const std::size_t n = cfg.n_values[ni];
    const bool rn_divisible = (p.r * n) % p.h == 0;
    const bool gcd_one = !p.gcd.is_infinite() && p.gcd.value() == 1;
    for (std::size_t ai = 0; ai < cfg.alphas.size(); ++ai) {
      const Rational& alpha = cfg.alphas[ai];
      const std::string cell_name = "n=" + std::to_string(n) + " alpha=" + to_string(alpha);
      if (!rn_divisible) {
        report.skipped.push_back(cell_name + ": h does not divide rn");
        continue;
      }
      if (!gcd_one && n % p.h != 0) {
        report.skipped.push_back(cell_name + ": gcd(H) != 1 and h does not divide n (h | rn only)");
        continue;
      }
      long target = ceil_to_long(sweep_threshold_value(p, alpha, n));
      if (target > static_cast<long>(n)) {
        report.skipped.push_back(cell_name + ": degree target " + std::to_string(target) + " exceeds n");
        continue;
      }
      SweepCell cell;
      cell.n = n;
      cell.alpha = alpha;
      cell.trials = cfg.trials;
      report.cells.push_back(cell);
      for (std::size_t t = 0; t < cfg.trials; ++t) {
        jobs.push_back({report.cells.size() - 1, t, static_cast<std::size_t>(std::max(0L, target))});
      }
    }
  }
  SearchOptions opts;
  opts.node_budget = cfg.node_budget;
  opts.time_limit = std::chrono::milliseconds(static_cast<long long>(cfg.time_limit_seconds * 1000));
  struct JobResult {
    SearchStatus status = SearchStatus::Unknown;
    std::uint64_t nodes = 0;
  };
  auto results = run_indexed<JobResult>(jobs.size(), cfg.threads, [&](std::size_t k) {
    const Job& job = jobs[k];
    const SweepCell& cell = report.cells[job.cell];
    MultipartiteGraph g = random_partite_graph(p.r, cell.n, job.target,
                                               trial_seed(cfg.seed, 2 + job.cell, job.trial), cfg.extra_edge_p);
    PerfectTilingResult res = perfect_H_tiling(g, cfg.h, opts);
    return JobResult{res.status, res.nodes};
  });
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    SweepCell& cell = report.cells[jobs[k].cell];
    switch (results[k].status) {
      case SearchStatus::Found: ++cell.tiled; break;
      case SearchStatus::NoneExists: ++cell.untiled; break;
      case SearchStatus::Unknown: ++cell.unknown; break;
    }
    cell.total_nodes += results[k].nodes;
  }
  return report;
}

}  // namespace htile
