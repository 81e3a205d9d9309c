#include "fca/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>

#include "fca/cbo.hpp"
#include "fca/derive.hpp"
#include "fca/lcm.hpp"

namespace fca {

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  if (name == "naive") return Algorithm::naive;
  if (name == "cbo") return Algorithm::cbo;
  if (name == "lcm2") return Algorithm::lcm2;
  if (name == "lcm3") return Algorithm::lcm3;
  return std::nullopt;
}

const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::naive: return "naive";
    case Algorithm::cbo: return "cbo";
    case Algorithm::lcm2: return "lcm2";
    case Algorithm::lcm3: return "lcm3";
  }
  return "?";
}

MineResult mine(const FormalContext& ctx, Weight min_support, const MineOptions& options) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  const Preprocessed pre = preprocess(ctx, min_support, options.preprocess);

  MineResult result;
  std::vector<Concept> raw;
  const ConceptSink sink = [&](Concept&& c) { raw.push_back(std::move(c)); };
  switch (options.algorithm) {
    case Algorithm::naive: {
      NaiveOptions o;
      o.with_extents = options.with_extents;
      auto r = enumerate_naive(pre.context, min_support, o);
      raw = std::move(r.concepts);
      result.stats = r.stats;
      break;
    }
    case Algorithm::cbo:
      result.stats = cbo_enumerate(pre.context, min_support, sink, CboOptions{options.with_extents});
      break;
    case Algorithm::lcm2: {
      LcmOptions o;
      o.pruning = options.pruning;
      o.with_extents = options.with_extents;
      result.stats = lcm2_enumerate(pre.context, min_support, sink, o);
      break;
    }
    case Algorithm::lcm3: {
      Lcm3Options o;
      o.lcm.pruning = options.pruning;
      o.lcm.with_extents = options.with_extents;
      o.dense_width = options.dense_width;
      result.stats = lcm3_enumerate(pre.context, min_support, sink, o);
      break;
    }
  }
  result.concepts = lift_concepts(pre, std::move(raw), min_support, options.with_extents);
  result.wall_ms = std::chrono::duration<double, std::milli>(clock::now() - start).count();
  return result;
}

Weight support_from_ratio(double ratio, Weight total) {
  if (!(ratio >= 0.0 && ratio <= 1.0))
    throw std::invalid_argument("support ratio must lie in [0, 1]");
  // Absorb representation error such as 0.1 * 30 = 3.0000000000000004.
  const double scaled = ratio * static_cast<double>(total);
  const double c = std::ceil(scaled - 1e-9 * std::max(1.0, scaled));
  return c <= 0 ? 0 : static_cast<Weight>(c);
}

FormalContext generate_context(std::uint64_t seed, std::size_t num_objects,
                               std::size_t num_attributes, double density) {
  if (!(density >= 0.0 && density <= 1.0)) throw std::invalid_argument("density must lie in [0, 1]");
  std::mt19937_64 gen(seed);
  std::vector<AttributeSet> rows(num_objects);
  for (auto& row : rows)
    for (std::size_t a = 1; a <= num_attributes; ++a) {
      // 53 high bits as a double in [0, 1): identical on every platform.
      const double u = static_cast<double>(gen() >> 11) * 0x1p-53;
      if (u < density) row.push_back(static_cast<AttrId>(a));
    }
  return FormalContext(num_attributes, std::move(rows));
}

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t concept_digest(const std::vector<Concept>& concepts) {
  std::uint64_t sum = 0;
  for (const auto& c : concepts) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&](std::uint64_t v) {
      for (int k = 0; k < 8; ++k) {
        h ^= (v >> (8 * k)) & 0xff;
        h *= 0x100000001b3ULL;
      }
    };
    mix(c.intent.size());
    for (AttrId a : c.intent) mix(a);
    mix(c.support);
    sum += splitmix(h);
  }
  return splitmix(sum ^ concepts.size());
}

std::string format_concept(const FormalContext& ctx, const Concept& c) {
  std::vector<std::uint64_t> labels;
  labels.reserve(c.intent.size());
  for (AttrId a : c.intent) labels.push_back(ctx.label(a));
  std::sort(labels.begin(), labels.end());
  std::string line;
  for (auto l : labels) {
    line += std::to_string(l);
    line += ' ';
  }
  line += '(' + std::to_string(c.support) + ')';
  if (c.extent) {
    line += " /";
    for (ObjId x : *c.extent) line += ' ' + std::to_string(x);
  }
  return line;
}

BenchReport run_bench(const FormalContext& ctx, Weight min_support,
                      const std::vector<BenchEntry>& entries, std::size_t repeat) {
  BenchReport report;
  repeat = std::max<std::size_t>(repeat, 1);
  for (const auto& e : entries) {
    BenchRow row;
    row.name = e.name;
    std::vector<double> times;
    for (std::size_t k = 0; k < repeat; ++k) {
      MineResult r = e.run(ctx, min_support);
      times.push_back(r.wall_ms);
      if (k == 0) {
        row.concepts = r.concepts.size();
        row.digest = concept_digest(r.concepts);
        row.stats = r.stats;
      }
    }
    std::sort(times.begin(), times.end());
    row.median_ms = times[times.size() / 2];
    if (!report.rows.empty() && report.rows.front().digest != row.digest) report.digests_agree = false;
    report.rows.push_back(std::move(row));
  }
  return report;
}

void write_bench_csv(std::ostream& out, const BenchReport& report) {
  out << "config,median_ms,concepts,digest,concepts_emitted,recursive_calls,closure_computations,"
         "canonicity_failures,pruning_rule_hits,conditional_dbs_built\n";
  for (const auto& r : report.rows) {
    char digest[17];
    std::snprintf(digest, sizeof digest, "%016llx", static_cast<unsigned long long>(r.digest));
    out << r.name << ',' << r.median_ms << ',' << r.concepts << ',' << digest << ','
        << r.stats.concepts_emitted << ',' << r.stats.recursive_calls << ','
        << r.stats.closure_computations << ',' << r.stats.canonicity_failures << ','
        << r.stats.pruning_rule_hits << ',' << r.stats.conditional_dbs_built << '\n';
  }
}

namespace {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path);
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw IoError("cannot write " + path);
}

FormalContext load_context(const std::string& path, const std::string& format) {
  const std::string text = read_file(path);
  if (format == "cxt") return parse_cxt(text);
  return parse_fimi(text);
}

struct SupportArgs {
  std::optional<Weight> absolute;
  std::optional<double> ratio;

  void add(CLI::App& app) {
    app.add_option("--min-support", absolute, "Weighted absolute support threshold");
    app.add_option("--min-support-ratio", ratio, "Support threshold as a fraction of all objects");
  }
  Weight resolve(const FormalContext& ctx) const {
    if (absolute.has_value() == ratio.has_value())
      throw UsageError("give exactly one of --min-support and --min-support-ratio");
    if (absolute) return *absolute;
    return support_from_ratio(*ratio, ctx.total_weight());
  }
  void validate() const {
    if (absolute.has_value() == ratio.has_value())
      throw UsageError("give exactly one of --min-support and --min-support-ratio");
    if (ratio && !(*ratio >= 0.0 && *ratio <= 1.0))
      throw UsageError("--min-support-ratio must lie in [0, 1]");
  }
};

std::size_t parse_dense_width(const std::string& s) {
  if (s == "inf") return kUnboundedDenseWidth;
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size() || s.empty() || s[0] == '-') throw UsageError("--dense-width expects a count or 'inf'");
  if (v > kMaxDenseWidth)
    throw CapacityError("dense width " + s + " exceeds the bit-array capacity " + std::to_string(kMaxDenseWidth));
  return static_cast<std::size_t>(v);
}

struct MineArgs {
  std::string input, format = "fimi", algorithm = "lcm2", output, stats, dense_width;
  SupportArgs support;
  bool no_pruning = false, no_attr_sort = false, sort_objects = false, no_merge = false;
  bool with_extents = false, sorted = false;
};

int do_mine(const MineArgs& a, std::ostream& out, std::ostream& err) {
  a.support.validate();
  auto alg = parse_algorithm(a.algorithm);
  if (!alg) throw UsageError("unknown algorithm " + a.algorithm);
  if (a.no_pruning && *alg != Algorithm::lcm2 && *alg != Algorithm::lcm3)
    throw UsageError("--no-pruning applies to lcm2 and lcm3 only");
  if (!a.dense_width.empty() && *alg != Algorithm::lcm3)
    throw UsageError("--dense-width applies to lcm3 only");

  MineOptions opts;
  opts.algorithm = *alg;
  opts.pruning = !a.no_pruning;
  opts.preprocess.sort_attributes = !a.no_attr_sort;
  opts.preprocess.sort_objects = a.sort_objects;
  opts.preprocess.merge_rows = !a.no_merge;
  opts.with_extents = a.with_extents;
  if (!a.dense_width.empty()) opts.dense_width = parse_dense_width(a.dense_width);

  const FormalContext ctx = load_context(a.input, a.format);
  const Weight ms = a.support.resolve(ctx);
  MineResult r = mine(ctx, ms, opts);

  std::string text;
  Weight support_sum = 0;
  for (const auto& c : r.concepts) support_sum += c.support;
  std::vector<std::string> lines;
  lines.reserve(r.concepts.size());
  for (const auto& c : r.concepts) lines.push_back(format_concept(ctx, c));
  if (a.sorted) std::sort(lines.begin(), lines.end());
  for (const auto& l : lines) {
    text += l;
    text += '\n';
  }
  if (a.output.empty())
    out << text;
  else
    write_file(a.output, text);

  if (!a.stats.empty()) {
    nlohmann::json j = {
        {"concepts_emitted", r.stats.concepts_emitted},
        {"recursive_calls", r.stats.recursive_calls},
        {"closure_computations", r.stats.closure_computations},
        {"canonicity_failures", r.stats.canonicity_failures},
        {"pruning_rule_hits", r.stats.pruning_rule_hits},
        {"conditional_dbs_built", r.stats.conditional_dbs_built},
        {"wall_ms", r.wall_ms},
    };
    write_file(a.stats, j.dump(2) + "\n");
  }
  err << "concepts: " << r.concepts.size() << ", support sum: " << support_sum
      << ", min support: " << ms << '\n';
  return exit_code::ok;
}

struct GenArgs {
  std::uint64_t seed = 0;
  std::size_t objects = 0, attributes = 0;
  double density = 0;
  std::string output;
};

int do_gen(const GenArgs& a, std::ostream& out) {
  if (!(a.density >= 0.0 && a.density <= 1.0)) throw UsageError("--density must lie in [0, 1]");
  const std::string text = to_fimi(generate_context(a.seed, a.objects, a.attributes, a.density));
  if (a.output.empty())
    out << text;
  else
    write_file(a.output, text);
  return exit_code::ok;
}

struct BenchArgs {
  std::string input, format = "fimi", output, dense_width;
  SupportArgs support;
  std::vector<std::string> algorithms{"cbo", "lcm2"};
  std::optional<std::uint64_t> seed;
  std::size_t objects = 500, attributes = 50;
  double density = 0.1;
  std::size_t repeat = 3;
};

int do_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
  a.support.validate();
  if (a.input.empty() == !a.seed.has_value())
    throw UsageError("give exactly one of --input and --seed");
  if (!(a.density >= 0.0 && a.density <= 1.0)) throw UsageError("--density must lie in [0, 1]");
  if (a.algorithms.empty()) throw UsageError("--algorithms needs at least one engine");
  std::vector<BenchEntry> entries;
  const std::size_t width = a.dense_width.empty() ? kDefaultDenseWidth : parse_dense_width(a.dense_width);
  for (const auto& name : a.algorithms) {
    auto alg = parse_algorithm(name);
    if (!alg) throw UsageError("unknown algorithm " + name);
    MineOptions o;
    o.algorithm = *alg;
    o.dense_width = width;
    entries.push_back({name, [o](const FormalContext& ctx, Weight ms) { return mine(ctx, ms, o); }});
  }
  const FormalContext ctx = a.seed ? generate_context(*a.seed, a.objects, a.attributes, a.density)
                                   : load_context(a.input, a.format);
  const Weight ms = a.support.resolve(ctx);
  const BenchReport report = run_bench(ctx, ms, entries, a.repeat);
  if (!report.digests_agree) {
    err << "concept digests differ between engines\n";
    write_bench_csv(err, report);
    return exit_code::digest_mismatch;
  }
  if (a.output.empty()) {
    write_bench_csv(out, report);
  } else {
    std::ostringstream buf;
    write_bench_csv(buf, report);
    write_file(a.output, buf.str());
  }
  return exit_code::ok;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Closed itemset and formal concept enumeration"};
  app.require_subcommand(1);

  MineArgs mine_args;
  auto* m = app.add_subcommand("mine", "Enumerate frequent closed itemsets");
  m->add_option("--input", mine_args.input, "Input context")->required();
  m->add_option("--format", mine_args.format)->check(CLI::IsMember({"fimi", "cxt"}));
  mine_args.support.add(*m);
  m->add_option("--algorithm", mine_args.algorithm)->check(CLI::IsMember({"naive", "cbo", "lcm2", "lcm3"}));
  m->add_flag("--no-pruning", mine_args.no_pruning);
  m->add_flag("--no-attr-sort", mine_args.no_attr_sort);
  m->add_flag("--sort-objects", mine_args.sort_objects);
  m->add_flag("--no-merge", mine_args.no_merge);
  m->add_option("--dense-width", mine_args.dense_width, "FP-tree width limit, or 'inf'");
  m->add_flag("--with-extents", mine_args.with_extents);
  m->add_option("--output", mine_args.output);
  m->add_option("--stats", mine_args.stats, "Write counters as JSON");
  m->add_flag("--sorted", mine_args.sorted);

  GenArgs gen_args;
  auto* g = app.add_subcommand("gen", "Write a random context in FIMI form");
  g->add_option("--seed", gen_args.seed)->required();
  g->add_option("--objects", gen_args.objects)->required();
  g->add_option("--attributes", gen_args.attributes)->required();
  g->add_option("--density", gen_args.density)->required();
  g->add_option("--output", gen_args.output);

  BenchArgs bench_args;
  auto* b = app.add_subcommand("bench", "Time engines against each other");
  b->add_option("--input", bench_args.input);
  b->add_option("--format", bench_args.format)->check(CLI::IsMember({"fimi", "cxt"}));
  b->add_option("--seed", bench_args.seed, "Generate the context instead of reading it");
  b->add_option("--objects", bench_args.objects);
  b->add_option("--attributes", bench_args.attributes);
  b->add_option("--density", bench_args.density);
  bench_args.support.add(*b);
  b->add_option("--algorithms", bench_args.algorithms)->delimiter(',');
  b->add_option("--dense-width", bench_args.dense_width);
  b->add_option("--repeat", bench_args.repeat);
  b->add_option("--output", bench_args.output, "CSV path (default standard output)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_code::ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::usage;
  }

  try {
    if (m->parsed()) return do_mine(mine_args, out, err);
    if (g->parsed()) return do_gen(gen_args, out);
    return do_bench(bench_args, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::usage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::io;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return exit_code::parse;
  } catch (const CapacityError& e) {
    err << "capacity: " << e.what() << '\n';
    return exit_code::capacity;
  }
}

}  // namespace fca
