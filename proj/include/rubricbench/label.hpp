#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace rubricbench {

// Ordinal correctness label. The underlying values encode the total order.
enum class Label : std::uint8_t { Incorrect = 0, PartiallyCorrect = 1, Correct = 2 };

// Label set of the SemEval-style source annotations; accepted on import only.
enum class FiveWayLabel : std::uint8_t {
  Correct,
  PartiallyCorrect,
  Incomplete,
  Contradictory,
  Irrelevant,
  NonDomain,
};

enum class LabelScheme : std::uint8_t { TwoWay, ThreeWay };

inline constexpr std::array<FiveWayLabel, 6> kAllFiveWayLabels = {
    FiveWayLabel::Correct,       FiveWayLabel::PartiallyCorrect, FiveWayLabel::Incomplete,
    FiveWayLabel::Contradictory, FiveWayLabel::Irrelevant,       FiveWayLabel::NonDomain,
};

/// Labels legal under `scheme`, most correct first.
std::span<const Label> labels_of(LabelScheme scheme);

bool is_legal(Label label, LabelScheme scheme);

/// Point value: 2/1/0 under ThreeWay, 1/0 under TwoWay.
/// Throws ValidationError for PartiallyCorrect under TwoWay.
int points(Label label, LabelScheme scheme);

/// Inverse of points(); nullopt when `value` is not a score of the scheme.
std::optional<Label> label_from_points(long long value, LabelScheme scheme);

Label collapse_label(FiveWayLabel source, LabelScheme scheme);

// Wire names: "correct", "partially_correct", "incorrect".
std::string_view to_string(Label label);
std::optional<Label> parse_label(std::string_view text);

// Human-facing names used inside prompts and reports ("Partially Correct").
std::string_view display_name(Label label);

std::string_view to_string(FiveWayLabel label);
std::optional<FiveWayLabel> parse_five_way_label(std::string_view text);

std::string_view to_string(LabelScheme scheme);
// Accepts "2way"/"3way", "2"/"3", "two_way"/"three_way".
std::optional<LabelScheme> parse_scheme(std::string_view text);

}  // namespace rubricbench
