#include "fca/context.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <numeric>
#include <stdexcept>

namespace fca {

FormalContext::FormalContext(std::size_t num_attributes, std::vector<AttributeSet> rows)
    : FormalContext(num_attributes, std::move(rows), {}) {}

FormalContext::FormalContext(std::size_t num_attributes, std::vector<AttributeSet> rows,
                             std::vector<Weight> weights)
    : num_attributes_(num_attributes), rows_(std::move(rows)), weights_(std::move(weights)) {
  if (weights_.empty()) weights_.assign(rows_.size(), 1);
  if (weights_.size() != rows_.size())
    throw std::invalid_argument("weights and rows differ in length");
  cardinality_.assign(num_attributes_, 0);
  for (std::size_t x = 0; x < rows_.size(); ++x) {
    if (weights_[x] == 0) throw std::invalid_argument("row weight must be positive");
    const auto& r = rows_[x];
    for (std::size_t k = 0; k < r.size(); ++k) {
      if (r[k] < 1 || r[k] > num_attributes_)
        throw std::invalid_argument("attribute id out of range in row " + std::to_string(x));
      if (k > 0 && r[k - 1] >= r[k])
        throw std::invalid_argument("row " + std::to_string(x) + " is not strictly ascending");
      cardinality_[r[k] - 1] += weights_[x];
    }
    total_weight_ += weights_[x];
  }
  labels_.resize(num_attributes_);
  std::iota(labels_.begin(), labels_.end(), std::uint64_t{1});
}

std::uint64_t FormalContext::label(AttrId a) const { return labels_.at(a - 1); }

void FormalContext::set_labels(std::vector<std::uint64_t> labels) {
  if (labels.size() != num_attributes_) throw std::invalid_argument("label count mismatch");
  labels_ = std::move(labels);
}

void FormalContext::set_names(std::vector<std::string> object_names,
                              std::vector<std::string> attribute_names) {
  object_names_ = std::move(object_names);
  attribute_names_ = std::move(attribute_names);
}

bool FormalContext::has(ObjId x, AttrId a) const {
  const auto& r = rows_.at(x);
  return std::binary_search(r.begin(), r.end(), a);
}

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\v' || c == '\f' || c == '\r'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::optional<std::uint64_t> parse_uint(std::string_view tok) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size() || tok.empty()) return std::nullopt;
  return v;
}

}  // namespace

FormalContext parse_fimi(std::string_view text) {
  const auto lines = split_lines(text);
  std::vector<std::vector<std::uint64_t>> raw(lines.size());
  std::vector<std::uint64_t> items;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    std::string_view line = lines[ln];
    std::size_t pos = 0;
    while (pos < line.size()) {
      while (pos < line.size() && is_space(line[pos])) ++pos;
      if (pos >= line.size()) break;
      std::size_t end = pos;
      while (end < line.size() && !is_space(line[end])) ++end;
      std::string_view tok = line.substr(pos, end - pos);
      auto v = parse_uint(tok);
      if (!v) throw ParseError(ln + 1, "invalid item '" + std::string(tok) + "'");
      raw[ln].push_back(*v);
      pos = end;
    }
    std::sort(raw[ln].begin(), raw[ln].end());
    raw[ln].erase(std::unique(raw[ln].begin(), raw[ln].end()), raw[ln].end());
    items.insert(items.end(), raw[ln].begin(), raw[ln].end());
  }
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());

  std::vector<AttributeSet> rows(raw.size());
  for (std::size_t x = 0; x < raw.size(); ++x) {
    rows[x].reserve(raw[x].size());
    for (auto v : raw[x]) {
      auto it = std::lower_bound(items.begin(), items.end(), v);
      rows[x].push_back(static_cast<AttrId>(it - items.begin()) + 1);
    }
  }
  FormalContext ctx(items.size(), std::move(rows));
  ctx.set_labels(std::move(items));
  return ctx;
}

FormalContext parse_cxt(std::string_view text) {
  const auto lines = split_lines(text);
  std::size_t ln = 0;
  auto line_at = [&](std::size_t i) -> std::string_view {
    if (i >= lines.size()) throw ParseError(i + 1, "unexpected end of file");
    return lines[i];
  };
  if (trim(line_at(ln)) != "B") throw ParseError(1, "expected header 'B'");
  ++ln;
  if (!parse_uint(trim(line_at(ln)))) ++ln;  // optional name line
  auto objects = parse_uint(trim(line_at(ln)));
  if (!objects) throw ParseError(ln + 1, "expected object count");
  ++ln;
  auto attributes = parse_uint(trim(line_at(ln)));
  if (!attributes) throw ParseError(ln + 1, "expected attribute count");
  ++ln;
  while (ln < lines.size() && trim(lines[ln]).empty()) ++ln;

  std::vector<std::string> object_names, attribute_names;
  for (std::uint64_t i = 0; i < *objects; ++i) object_names.emplace_back(trim(line_at(ln++)));
  for (std::uint64_t i = 0; i < *attributes; ++i)
    attribute_names.emplace_back(trim(line_at(ln++)));

  std::vector<AttributeSet> rows;
  rows.reserve(*objects);
  for (std::uint64_t i = 0; i < *objects; ++i) {
    std::string_view line = trim(line_at(ln));
    if (line.size() != *attributes)
      throw ParseError(ln + 1, "expected " + std::to_string(*attributes) + " incidence marks, got " +
                                   std::to_string(line.size()));
    AttributeSet row;
    for (std::size_t k = 0; k < line.size(); ++k) {
      char c = line[k];
      if (c == 'X' || c == 'x') {
        row.push_back(static_cast<AttrId>(k + 1));
      } else if (c != '.') {
        throw ParseError(ln + 1, std::string("illegal character '") + c + "'");
      }
    }
    rows.push_back(std::move(row));
    ++ln;
  }
  for (; ln < lines.size(); ++ln)
    if (!trim(lines[ln]).empty()) throw ParseError(ln + 1, "trailing data after incidence rows");

  FormalContext ctx(*attributes, std::move(rows));
  ctx.set_names(std::move(object_names), std::move(attribute_names));
  return ctx;
}

std::string to_fimi(const FormalContext& ctx) {
  std::string out;
  for (const auto& row : ctx.rows()) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) out += ' ';
      out += std::to_string(ctx.label(row[k]));
    }
    out += '\n';
  }
  return out;
}

Preprocessed preprocess(const FormalContext& ctx, Weight min_support,
                        const PreprocessOptions& options) {
  Preprocessed pre;
  const std::size_t n = ctx.num_attributes();
  pre.source_objects = ctx.num_objects();
  pre.source_attributes = n;
  pre.source_total_weight = ctx.total_weight();
  pre.source_bottom_empty = std::none_of(ctx.rows().begin(), ctx.rows().end(),
                                         [n](const AttributeSet& r) { return r.size() == n; });

  std::vector<AttrId> kept;
  for (AttrId a = 1; a <= n; ++a) {
    Weight c = ctx.cardinality(a);
    if (c > 0 && c >= min_support) kept.push_back(a);
  }
  if (options.sort_attributes) {
    std::stable_sort(kept.begin(), kept.end(), [&](AttrId a, AttrId b) {
      return ctx.cardinality(a) > ctx.cardinality(b);
    });
  }
  pre.remap.new_to_old = kept;
  pre.remap.old_to_new.assign(n, std::nullopt);
  for (std::size_t k = 0; k < kept.size(); ++k)
    pre.remap.old_to_new[kept[k] - 1] = static_cast<AttrId>(k + 1);

  struct Pending {
    AttributeSet row;
    ObjId source;
  };
  std::vector<Pending> pending;
  for (ObjId x = 0; x < ctx.num_objects(); ++x) {
    AttributeSet row;
    for (AttrId a : ctx.row(x))
      if (auto na = pre.remap.old_to_new[a - 1]) row.push_back(*na);
    if (row.empty()) {
      pre.dropped_weight += ctx.weight(x);
      continue;
    }
    std::sort(row.begin(), row.end());
    pending.push_back({std::move(row), x});
  }
  if (options.sort_objects) {
    std::stable_sort(pending.begin(), pending.end(), [](const Pending& a, const Pending& b) {
      return a.row.size() > b.row.size();
    });
  }

  std::vector<AttributeSet> rows;
  std::vector<Weight> weights;
  std::map<AttributeSet, std::size_t> seen;
  for (auto& p : pending) {
    if (options.merge_rows) {
      auto [it, inserted] = seen.try_emplace(p.row, rows.size());
      if (!inserted) {
        weights[it->second] += ctx.weight(p.source);
        pre.merge.sources[it->second].push_back(p.source);
        continue;
      }
    }
    weights.push_back(ctx.weight(p.source));
    pre.merge.sources.push_back({p.source});
    rows.push_back(std::move(p.row));
  }
  for (auto& s : pre.merge.sources) std::sort(s.begin(), s.end());

  pre.context = FormalContext(kept.size(), std::move(rows), std::move(weights));
  std::vector<std::uint64_t> labels;
  labels.reserve(kept.size());
  for (AttrId old : kept) labels.push_back(ctx.label(old));
  pre.context.set_labels(std::move(labels));
  if (!ctx.attribute_names().empty()) {
    std::vector<std::string> names;
    for (AttrId old : kept) names.push_back(ctx.attribute_names().at(old - 1));
    pre.context.set_names({}, std::move(names));
  }
  return pre;
}

std::vector<Concept> lift_concepts(const Preprocessed& pre, std::vector<Concept> concepts,
                                   Weight min_support, bool with_extents) {
  std::vector<Concept> out;
  out.reserve(concepts.size() + 2);
  for (auto& c : concepts) {
    // Empty-extent concepts are rebuilt below from source facts.
    if (c.support == 0) continue;
    Concept lifted;
    lifted.support = c.support;
    for (AttrId a : c.intent) lifted.intent.push_back(pre.remap.to_old(a));
    std::sort(lifted.intent.begin(), lifted.intent.end());
    if (with_extents && c.extent) {
      std::vector<ObjId> ext;
      for (ObjId x : *c.extent) {
        const auto& src = pre.merge.sources.at(x);
        ext.insert(ext.end(), src.begin(), src.end());
      }
      std::sort(ext.begin(), ext.end());
      lifted.extent = std::move(ext);
    }
    out.push_back(std::move(lifted));
  }

  std::vector<ObjId> all_objects;
  if (with_extents) {
    all_objects.resize(pre.source_objects);
    std::iota(all_objects.begin(), all_objects.end(), ObjId{0});
  }
  // Dropped rows have no retained attribute, so the source top intent is
  // empty whenever it is frequent.
  if (pre.dropped_weight > 0 && pre.source_total_weight >= min_support) {
    auto top = std::find_if(out.begin(), out.end(), [](const Concept& c) { return c.intent.empty(); });
    if (top == out.end()) {
      out.push_back({});
      top = std::prev(out.end());
    }
    top->support = pre.source_total_weight;
    if (with_extents) top->extent = all_objects;
  }
  if (min_support == 0 && pre.source_bottom_empty) {
    Concept bottom;
    bottom.intent.resize(pre.source_attributes);
    std::iota(bottom.intent.begin(), bottom.intent.end(), AttrId{1});
    bottom.support = 0;
    if (with_extents) bottom.extent = std::vector<ObjId>{};
    out.push_back(std::move(bottom));
  }
  sort_concepts(out);
  return out;
}

}  // namespace fca
