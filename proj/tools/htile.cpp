// htile command-line front end. stdout carries JSON or CSV only; diagnostics
// go to stderr. Exit codes: 0 ok, 1 negative verdict, 2 usage or input error,
// 3 resource or budget exhausted.

#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "htile/htile.hpp"

namespace {

using namespace htile;

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kUsage = 2;
constexpr int kResource = 3;

struct Globals {
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> budget;
  std::optional<std::size_t> columns_cap;
};

void emit(const json& doc) { std::cout << doc.dump() << '\n'; }

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << text;
}

// A host document is multipartite when it carries "classes"; a "sidecar"
// written by construct also supplies its block layout.
struct Host {
  std::optional<MultipartiteGraph> multipartite;
  Graph graph;
  std::optional<BlockStructure> blocks;
};

Host read_host(const std::string& path) {
  json doc = detail::parse_document(read_text(path));
  if (!doc.is_object() || !doc.contains("classes")) return {std::nullopt, graph_from_json(doc), std::nullopt};
  MultipartiteGraph g = multipartite_from_json(doc);
  Host host{g, g.graph(), std::nullopt};
  auto side = doc.find("sidecar");
  if (side != doc.end() && side->is_object() && side->contains("blocks") && !(*side)["blocks"].is_null()) {
    try {
      host.blocks = BlockStructure((*side)["blocks"].get<std::vector<std::vector<std::size_t>>>());
    } catch (const json::exception&) {
      throw ParseError("sidecar.blocks: expected an r x r matrix of non-negative integers");
    }
    if (host.blocks->vertex_count() != g.vertex_count()) throw ParseError("sidecar.blocks: does not match the graph");
  }
  return host;
}

Graph read_pattern(const std::string& path) { return parse_graph(read_text(path)); }

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos) {
      throw ParseError("--complete: '" + item + "' is not a non-negative integer");
    }
    out.push_back(std::stoul(item));
  }
  if (out.empty()) throw ParseError("--complete: no class sizes given");
  return out;
}

// ---------------------------------------------------------------------------

int run_params(const std::string& h_file, const std::string& field) {
  ChromaticProfile p = chromatic_profile(read_pattern(h_file));
  if (field.empty()) {
    emit(to_json(p));
  } else if (field == "sigma") {
    std::cout << to_string(p.sigma) << '\n';
  } else if (field == "chi_cr") {
    std::cout << to_string(p.chi_cr) << '\n';
  } else if (field == "chi_star") {
    std::cout << to_string(p.chi_star) << '\n';
  } else {
    std::cout << p.gcd.str() << '\n';
  }
  return kOk;
}

int run_fractile(const Globals& g, const std::string& g_file, const std::string& a_text, const std::string& b_text,
                 const std::string& h_file) {
  MultipartiteGraph host = parse_multipartite(read_text(g_file));
  std::optional<ChromaticProfile> profile;
  if (!h_file.empty()) profile = chromatic_profile(read_pattern(h_file));
  if ((a_text.empty() || b_text.empty()) && !profile) throw ContractError("give --a and --b, or --h-file");
  Rational a = a_text.empty() ? profile->a : parse_rational(a_text);
  Rational b = b_text.empty() ? profile->b : parse_rational(b_text);

  FractionalOptions opts;
  if (g.columns_cap) opts.column_cap = *g.columns_cap;
  WeightedTilingSolution sol = solve_perfect_weighted_tiling(host, a, b, opts);
  json out = {{"a", to_string(a)}, {"b", to_string(b)}, {"columns", sol.columns}, {"pivots", sol.pivots}};
  if (sol.feasible()) {
    out["status"] = "feasible";
    out["weights"] = to_json(sol.tiling());
  } else {
    out["status"] = "infeasible";
    out["certificate"] = to_json(sol.certificate());
  }
  emit(out);
  return sol.feasible() ? kOk : kNegative;
}

SearchOptions search_options(const Globals& g) {
  SearchOptions opts;
  if (g.budget) opts.node_budget = *g.budget;
  if (g.columns_cap) opts.copy_cap = *g.columns_cap;
  return opts;
}

int run_tile(const Globals& g, const std::vector<std::string>& files, const std::string& mode,
             const std::string& complete) {
  if (!complete.empty()) {
    if (files.size() != 1) throw ContractError("tile --complete takes exactly one file: the pattern graph H");
    const Graph h = read_pattern(files[0]);
    const auto sizes = parse_sizes(complete);
    auto sol = pattern_tiling_complete_multipartite(sizes, h);
    if (!sol) {
      emit({{"status", "none"}, {"sizes", sizes}});
      return kNegative;
    }
    Tiling t = realize_pattern_solution(sizes, h, *sol);
    emit({{"status", "found"}, {"sizes", sizes}, {"patterns", sol->patterns}, {"counts", sol->counts},
          {"tiling", to_json(t)}});
    return kOk;
  }
  if (files.size() != 2) throw ContractError("tile takes two files: host G and pattern H");
  const Host host = read_host(files[0]);
  const Graph h = read_pattern(files[1]);
  SearchOptions opts = search_options(g);
  opts.blocks = host.blocks;

  if (mode == "perfect") {
    PerfectTilingResult res =
        host.multipartite ? perfect_H_tiling(*host.multipartite, h, opts) : perfect_H_tiling(host.graph, h, opts);
    json out = {{"status", to_string(res.status)}, {"nodes", res.nodes}, {"copies", res.copies}};
    out["tiling"] = to_json(res.tiling);
    emit(out);
    switch (res.status) {
      case SearchStatus::Found: return kOk;
      case SearchStatus::NoneExists: return kNegative;
      case SearchStatus::Unknown: return kResource;
    }
  }
  MaxTilingResult res = host.multipartite ? max_H_tiling(*host.multipartite, h, opts) : max_H_tiling(host.graph, h, opts);
  json out = {{"status", res.optimal ? "found" : "unknown"},
              {"size", res.tiling.size()},
              {"optimal", res.optimal},
              {"upper_bound", res.upper_bound},
              {"nodes", res.nodes},
              {"copies", res.copies}};
  out["tiling"] = to_json(res.tiling);
  emit(out);
  return res.optimal ? kOk : kResource;
}

json sidecar(const std::string& family, const std::vector<std::vector<std::size_t>>& blocks) {
  return {{"family", family}, {"blocks", blocks}};
}

int run_construct(const std::string& family, const std::string& h_file, std::optional<std::size_t> n,
                  std::optional<std::size_t> s, const std::string& blocks_text, const std::string& out_path) {
  json doc;
  if (family == "U") {
    if (h_file.empty()) throw ContractError("construct --family U needs --h-file");
    const Graph h = read_pattern(h_file);
    std::vector<std::size_t> sizes;
    json side = {{"family", "U"}};
    if (s) {
      sizes = build_U(h, *s);
      side["s"] = *s;
    } else {
      constexpr std::size_t kSearchLimit = 8;
      auto found = find_min_s_for_U(h, kSearchLimit);
      if (!found) throw ResourceError("no s <= 8 gives a pattern-feasible U(H); pass --s explicitly");
      sizes = found->sizes;
      side["s"] = found->s;
      side["solution"] = to_json(found->solution);
    }
    side["sizes"] = sizes;
    doc = to_json(complete_multipartite(sizes));
    doc["sidecar"] = side;
  } else {
    ConstructionSpec spec;
    if (family == "blocks") {
      if (blocks_text.empty()) throw ContractError("construct --family blocks needs --blocks '[[...],...]'");
      json m = detail::parse_document(blocks_text);
      try {
        spec.block_sizes = m.get<std::vector<std::vector<std::size_t>>>();
      } catch (const json::exception&) {
        throw ParseError("--blocks: expected an r x r matrix of non-negative integers");
      }
      spec.r = spec.block_sizes.size();
      spec.n = n.value_or(spec.block_sizes.empty() ? 0 : [&] {
        std::size_t sum = 0;
        for (auto x : spec.block_sizes.front()) sum += x;
        return sum;
      }());
    } else {
      if (h_file.empty() || !n) throw ContractError("construct --family " + family + " needs --h-file and --n");
      const Graph h = read_pattern(h_file);
      spec = family == "gcd" ? gcd_lower_bound_spec(h, *n) : sigma_lower_bound_spec(h, *n);
    }
    BlockConstruction built = build_block_construction(spec);
    doc = to_json(built.graph);
    doc["sidecar"] = sidecar(to_string(spec.family), spec.block_sizes);
  }
  if (out_path.empty()) {
    emit(doc);
  } else {
    write_file(out_path, doc.dump() + "\n");
  }
  return kOk;
}

CampaignConfig load_config(const Globals& g, const std::string& path) {
  std::filesystem::path base = std::filesystem::path(path).parent_path();
  CampaignConfig cfg = parse_campaign_config(read_text(path), base);
  if (g.seed) cfg.seed = *g.seed;
  if (g.budget) cfg.node_budget = *g.budget;
  if (g.columns_cap) cfg.column_cap = *g.columns_cap;
  return cfg;
}

// CSV goes to the configured output file (then the summary goes to stdout),
// or to stdout (then the summary goes to stderr).
void publish(const CampaignConfig& cfg, const std::string& csv, const json& summary) {
  if (cfg.output) {
    write_file(*cfg.output, csv);
    emit(summary);
  } else {
    std::cout << csv;
    std::cerr << summary.dump() << '\n';
  }
}

int run_sweep(const Globals& g, const std::string& config) {
  CampaignConfig cfg = load_config(g, config);
  SweepReport rep = sweep_threshold(cfg);
  for (const auto& s : rep.skipped) std::cerr << "skipped " << s << '\n';
  publish(cfg, rep.csv(), rep.summary());
  return kOk;
}

int run_lemma(const Globals& g, const std::string& config) {
  CampaignConfig cfg = load_config(g, config);
  LemmaReport rep = verify_lemma_campaign(cfg);
  json summary = rep.summary();
  if (!rep.failures.empty()) summary["failures"] = rep.failures;
  publish(cfg, rep.csv(), summary);
  return rep.passed() ? kOk : kNegative;
}

int run_certify(const Globals& g, const std::string& h_file, std::size_t n) {
  SearchOptions opts = search_options(g);
  CertifyReport rep = certify_lower_bound(read_pattern(h_file), n, opts);
  emit(rep.to_json());
  if (rep.certified) return kOk;
  return rep.search == "unknown" ? kResource : kNegative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tiling parameters, fractional clique tilings and exact H-tilings of multipartite graphs"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals globals;
  app.add_option("--seed", globals.seed, "Campaign seed (overrides the config)");
  app.add_option("--budget", globals.budget, "Search node budget");
  app.add_option("--columns-cap", globals.columns_cap, "Cap on LP columns and enumerated copies");

  std::string h_file, g_file, field, a_text, b_text, mode = "perfect", complete, family, blocks_text, out_path, config;
  std::vector<std::string> files;
  std::optional<std::size_t> n, s;
  std::size_t certify_n = 0;

  auto* params = app.add_subcommand("params", "Chromatic profile of H as JSON");
  params->add_option("H", h_file, "Pattern graph file ('-' for stdin)")->required();
  params->add_option("--field", field, "Print one value")->check(CLI::IsMember({"sigma", "chi_cr", "gcd", "chi_star"}));

  auto* fractile = app.add_subcommand("fractile", "Perfect (a,b)-weighted fractional K_r-tiling or Farkas certificate");
  fractile->add_option("G", g_file, "Multipartite host file ('-' for stdin)")->required();
  fractile->add_option("--a", a_text, "Root weight p/q");
  fractile->add_option("--b", b_text, "Non-root weight p/q");
  fractile->add_option("--h-file", h_file, "Take (a,b) from this pattern graph's profile");

  auto* tile = app.add_subcommand("tile", "Exact perfect or maximum H-tiling");
  tile->add_option("files", files, "G-file H-file, or only H-file with --complete")->required();
  tile->add_option("--mode", mode, "perfect or max")->check(CLI::IsMember({"perfect", "max"}));
  tile->add_option("--complete", complete, "Class sizes s1,...,sr of a complete multipartite host");

  auto* construct = app.add_subcommand("construct", "Lower-bound and auxiliary host graphs");
  construct->add_option("--family", family, "gcd, sigma, U or blocks")
      ->required()
      ->check(CLI::IsMember({"gcd", "sigma", "U", "blocks"}));
  construct->add_option("--h-file", h_file, "Pattern graph file");
  construct->add_option("--n", n, "Class size");
  construct->add_option("--s", s, "Scale s of U(H); smallest feasible s when omitted");
  construct->add_option("--blocks", blocks_text, "Block matrix [[n_11,...],...] (column-major) for --family blocks");
  construct->add_option("--out", out_path, "Write here instead of stdout");

  auto* sweep = app.add_subcommand("sweep", "Threshold sweep campaign (CSV)");
  sweep->add_option("--config", config, "Campaign config JSON")->required();

  auto* certify = app.add_subcommand("certify", "Certify the lower-bound construction for H at class size n");
  certify->add_option("--h-file", h_file, "Pattern graph file")->required();
  certify->add_option("--n", certify_n, "Class size")->required();

  auto* lemma = app.add_subcommand("lemma", "Fractional tiling Lemma campaign (CSV)");
  lemma->add_option("--config", config, "Campaign config JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (params->parsed()) return run_params(h_file, field);
    if (fractile->parsed()) return run_fractile(globals, g_file, a_text, b_text, h_file);
    if (tile->parsed()) return run_tile(globals, files, mode, complete);
    if (construct->parsed()) return run_construct(family, h_file, n, s, blocks_text, out_path);
    if (sweep->parsed()) return run_sweep(globals, config);
    if (certify->parsed()) return run_certify(globals, h_file, certify_n);
    if (lemma->parsed()) return run_lemma(globals, config);
  } catch (const ResourceError& e) {
    std::cerr << "resource: " << e.what() << '\n';
    return kResource;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
