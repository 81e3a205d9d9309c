#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fca/types.hpp"

namespace fca {

/// Weighted, row-oriented binary relation. Rows are strictly ascending
/// attribute lists over 1..num_attributes(). Immutable once built.
class FormalContext {
 public:
  FormalContext() = default;

  /// Builds a context with unit weights. Rows must be strictly ascending
  /// with ids in 1..num_attributes; throws std::invalid_argument otherwise.
  FormalContext(std::size_t num_attributes, std::vector<AttributeSet> rows);
  FormalContext(std::size_t num_attributes, std::vector<AttributeSet> rows,
                std::vector<Weight> weights);

  std::size_t num_objects() const noexcept { return rows_.size(); }
  std::size_t num_attributes() const noexcept { return num_attributes_; }

  std::span<const AttrId> row(ObjId x) const { return rows_.at(x); }
  const std::vector<AttributeSet>& rows() const noexcept { return rows_; }
  Weight weight(ObjId x) const { return weights_.at(x); }
  const std::vector<Weight>& weights() const noexcept { return weights_; }
  Weight total_weight() const noexcept { return total_weight_; }

  /// Weighted size of the extent of attribute a.
  Weight cardinality(AttrId a) const { return cardinality_.at(a - 1); }
  const std::vector<Weight>& cardinalities() const noexcept { return cardinality_; }

  /// External id shown to users for attribute a (the id as it appeared in
  /// the input file). Defaults to a itself.
  std::uint64_t label(AttrId a) const;
  const std::vector<std::uint64_t>& labels() const noexcept { return labels_; }
  void set_labels(std::vector<std::uint64_t> labels);

  const std::vector<std::string>& attribute_names() const noexcept { return attribute_names_; }
  const std::vector<std::string>& object_names() const noexcept { return object_names_; }
  void set_names(std::vector<std::string> object_names, std::vector<std::string> attribute_names);

  bool has(ObjId x, AttrId a) const;

 private:
  std::size_t num_attributes_ = 0;
  std::vector<AttributeSet> rows_;
  std::vector<Weight> weights_;
  std::vector<Weight> cardinality_;
  Weight total_weight_ = 0;
  std::vector<std::uint64_t> labels_;
  std::vector<std::string> object_names_;
  std::vector<std::string> attribute_names_;
};

/// Bijection between retained (new) attribute ids and the ids of the
/// context they were derived from.
struct AttributeRemap {
  std::vector<AttrId> new_to_old;                 // index new-1
  std::vector<std::optional<AttrId>> old_to_new;  // index old-1; empty = removed

  AttrId to_old(AttrId a) const { return new_to_old.at(a - 1); }
  std::optional<AttrId> to_new(AttrId old) const { return old_to_new.at(old - 1); }
};

/// For each retained row, the source rows merged into it (ascending).
struct ObjectMerge {
  std::vector<std::vector<ObjId>> sources;
};

struct PreprocessOptions {
  bool sort_attributes = true;
  bool sort_objects = false;
  bool merge_rows = true;
};

struct Preprocessed {
  FormalContext context;
  AttributeRemap remap;
  ObjectMerge merge;

  // Facts about the source needed to translate concepts back.
  std::size_t source_objects = 0;
  std::size_t source_attributes = 0;
  Weight source_total_weight = 0;
  /// Weight of source rows dropped because no retained attribute was left.
  Weight dropped_weight = 0;
  /// True when no source row has every source attribute, i.e. the full
  /// attribute set has an empty extent.
  bool source_bottom_empty = false;
};

/// Parses whitespace-separated item ids, one transaction per line. Items
/// are renumbered densely in ascending order of their value; labels keep
/// the original values.
FormalContext parse_fimi(std::string_view text);

/// Parses a Burmeister .cxt context.
FormalContext parse_cxt(std::string_view text);

/// Writes the context in FIMI form using attribute labels.
std::string to_fimi(const FormalContext& ctx);

/// Removes empty and infrequent attributes, removes empty rows, optionally
/// reorders attributes (descending weighted cardinality, ties by id) and
/// objects (descending row size, ties by index), and merges identical rows.
Preprocessed preprocess(const FormalContext& ctx, Weight min_support,
                        const PreprocessOptions& options = {});

/// Translates concepts mined on `pre.context` into the ids of the source
/// context: intents through the remap, extents through the merge map. Also
/// restores the two concepts preprocessing can distort: the top concept
/// when empty rows were dropped, and the bottom concept (full attribute set,
/// empty extent) when min_support is 0. Output is sorted. Extents are
/// produced only when `with_extents` is set and the input carries them.
std::vector<Concept> lift_concepts(const Preprocessed& pre, std::vector<Concept> concepts,
                                   Weight min_support, bool with_extents = false);

}  // namespace fca
