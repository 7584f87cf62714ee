#include "welfare/welfare_function.hpp"

#include <array>
#include <utility>

namespace welfare {

namespace {

constexpr std::array<std::pair<WelfareTag, std::string_view>, 6> kTagNames = {{
    {WelfareTag::kGreedy, "greedy"},
    {WelfareTag::kEgalitarian, "egalitarian"},
    {WelfareTag::kFairness, "fairness"},
    {WelfareTag::kShiftEgalitarian, "shift-egalitarian"},
    {WelfareTag::kAffineEgalitarian, "affine-egalitarian"},
    {WelfareTag::kAffineFairness, "affine-fairness"},
}};

}  // namespace

std::string_view to_string(WelfareTag tag) {
  for (const auto& [t, name] : kTagNames) {
    if (t == tag) return name;
  }
  return "greedy";
}

WelfareTag parse_welfare_tag(std::string_view name) {
  for (const auto& [t, n] : kTagNames) {
    if (n == name) return t;
  }
  throw ConfigError("unknown welfare function: " + std::string(name));
}

bool is_normalized(WelfareTag tag) {
  return tag == WelfareTag::kShiftEgalitarian || tag == WelfareTag::kAffineEgalitarian ||
         tag == WelfareTag::kAffineFairness;
}

WelfareFunction WelfareFunction::make(WelfareTag tag,
                                      std::optional<NormalizationConstants> constants) {
  WelfareFunction wf(tag);
  if (!is_normalized(tag)) return wf;
  if (!constants) {
    throw ConfigError(std::string(to_string(tag)) + " needs Stackelberg baselines");
  }
  if (tag != WelfareTag::kShiftEgalitarian &&
      (constants->penalty.x == 0.0 || constants->penalty.y == 0.0 ||
       !std::isfinite(constants->penalty.x) || !std::isfinite(constants->penalty.y))) {
    throw ConfigError(std::string(to_string(tag)) +
                      ": degenerate normalisation (zero arrogance penalty)");
  }
  wf.constants_ = constants;
  return wf;
}

double welfare_value(const WelfareFunction& wf, double rx, double ry, Player player) {
  return wf.value(rx, ry, player);
}

}  // namespace welfare
