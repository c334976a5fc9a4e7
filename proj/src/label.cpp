#include "rubricbench/label.hpp"

#include <algorithm>

#include "rubricbench/error.hpp"

namespace rubricbench {

namespace {

constexpr std::array<Label, 3> kThreeWay = {Label::Correct, Label::PartiallyCorrect, Label::Incorrect};
constexpr std::array<Label, 2> kTwoWay = {Label::Correct, Label::Incorrect};

}  // namespace

std::span<const Label> labels_of(LabelScheme scheme) {
  if (scheme == LabelScheme::TwoWay) return kTwoWay;
  return kThreeWay;
}

bool is_legal(Label label, LabelScheme scheme) {
  return scheme == LabelScheme::ThreeWay || label != Label::PartiallyCorrect;
}

int points(Label label, LabelScheme scheme) {
  if (!is_legal(label, scheme)) {
    throw ValidationError("label partially_correct has no point value under the 2way scheme");
  }
  if (scheme == LabelScheme::TwoWay) return label == Label::Correct ? 1 : 0;
  return static_cast<int>(label);
}

std::optional<Label> label_from_points(long long value, LabelScheme scheme) {
  for (Label label : labels_of(scheme)) {
    if (points(label, scheme) == value) return label;
  }
  return std::nullopt;
}

Label collapse_label(FiveWayLabel source, LabelScheme scheme) {
  if (source == FiveWayLabel::Correct) return Label::Correct;
  if (scheme == LabelScheme::TwoWay) return Label::Incorrect;
  switch (source) {
    case FiveWayLabel::PartiallyCorrect:
    case FiveWayLabel::Incomplete:
      return Label::PartiallyCorrect;
    default:
      return Label::Incorrect;
  }
}

std::string_view to_string(Label label) {
  switch (label) {
    case Label::Correct: return "correct";
    case Label::PartiallyCorrect: return "partially_correct";
    case Label::Incorrect: return "incorrect";
  }
  return "incorrect";
}

std::optional<Label> parse_label(std::string_view text) {
  for (Label label : kThreeWay) {
    if (to_string(label) == text) return label;
  }
  return std::nullopt;
}

std::string_view display_name(Label label) {
  switch (label) {
    case Label::Correct: return "Correct";
    case Label::PartiallyCorrect: return "Partially Correct";
    case Label::Incorrect: return "Incorrect";
  }
  return "Incorrect";
}

std::string_view to_string(FiveWayLabel label) {
  switch (label) {
    case FiveWayLabel::Correct: return "correct";
    case FiveWayLabel::PartiallyCorrect: return "partially_correct";
    case FiveWayLabel::Incomplete: return "incomplete";
    case FiveWayLabel::Contradictory: return "contradictory";
    case FiveWayLabel::Irrelevant: return "irrelevant";
    case FiveWayLabel::NonDomain: return "non_domain";
  }
  return "non_domain";
}

std::optional<FiveWayLabel> parse_five_way_label(std::string_view text) {
  for (FiveWayLabel label : kAllFiveWayLabels) {
    if (to_string(label) == text) return label;
  }
  return std::nullopt;
}

std::string_view to_string(LabelScheme scheme) {
  return scheme == LabelScheme::TwoWay ? "2way" : "3way";
}

std::optional<LabelScheme> parse_scheme(std::string_view text) {
  if (text == "2way" || text == "2" || text == "two_way") return LabelScheme::TwoWay;
  if (text == "3way" || text == "3" || text == "three_way") return LabelScheme::ThreeWay;
  return std::nullopt;
}

}  // namespace rubricbench
