#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace tracelab::diagram {

// One of the 2r oriented-bar labels (j, +) / (j, -); bars are numbered from 1.
struct ThetaLabel {
  int bar{0};
  int sign{+1};  // +1 or -1

  std::string str() const { return std::to_string(bar) + (sign > 0 ? "+" : "-"); }
  friend auto operator<=>(const ThetaLabel&, const ThetaLabel&) = default;
};

ThetaLabel parse_label(const std::string& s);

enum class Role { origin, terminus };
enum class Side { left, right };

// A bar endpoint lying on a beta component.  The side records on which side
// of the oriented component the bar band attaches.
struct Attachment {
  int bar{0};
  Role role{Role::origin};
  Side side{Side::left};
};

struct Component {
  std::string id;
  // cyclic order along the component's orientation
  std::vector<Attachment> attachments;
};

// A generalized-eight diagram after opening r crossings: an embedded
// multi-curve beta carrying 2r bar endpoints plus the traversal permutation.
// sigma is stored as a map label -> label and must agree with the traversal
// derived from the attachment order; signs must agree with each label's own
// orientation sign.
struct Diagram {
  int r{0};
  std::vector<Component> components;
  std::map<ThetaLabel, ThetaLabel> sigma;
  std::map<ThetaLabel, int> signs;
};

// All structural checks; returns human-readable problems (empty = valid):
// missing/duplicated bar endpoints, components without attachments (r >= 1),
// sign imbalance per bar, sigma not a bijection or disagreeing with the
// attachment-derived traversal ("broken cycle"), bad label sets.
std::vector<std::string> validate(const Diagram& d);
void ensure_valid(const Diagram& d);

// Traversal permutation implied by the attachments: sigma(q) is the label
// whose bar leaves from the endpoint following q's terminus point along its
// component.
std::map<ThetaLabel, ThetaLabel> derived_sigma(const Diagram& d);

// Orbit decomposition of sigma; one cycle per component of the underlying
// (multi-)loop.  Single loops give one cycle of length 2r.
std::vector<std::vector<ThetaLabel>> loop_cycles(const Diagram& d);

// Traversal entries (bar, sign) of the sigma-cycle through q0, in order
// starting at q0.
struct TraversalEntry {
  int bar{0};
  int sign{+1};
};
std::vector<TraversalEntry> relabel(const Diagram& d, ThetaLabel q0);

struct Signature {
  int g{0};
  int n{0};
  friend auto operator<=>(const Signature&, const Signature&) = default;
};

// Topological type of the surface obtained by thickening beta together with
// the bar bands: boundary components counted by the ribbon-graph boundary
// walk, genus from 2g = r + 2 - n.  Throws if the walk yields an odd
// left-hand side (corrupt orientation data).
Signature filling_signature(const Diagram& d);

// Theta_t(lambda): labels whose bar terminates on the given component.  Both
// labels of a bar may land on one component; the list keeps multiplicity.
std::map<std::string, std::vector<ThetaLabel>> theta_support(const Diagram& d);

// JSON round trip; format documented in the README.
Diagram from_json_text(const std::string& text);
Diagram load_diagram(const std::string& path);
std::string to_json_text(const Diagram& d);

// Built-in exemplars.
Diagram figure_eight();                  // r = 1, fills (0, 3)
Diagram once_holed_torus();              // r = 1, one beta component, fills (1, 1)
Diagram flower(int r);                   // r petals on a core circle, fills (0, r + 2)
Diagram three_bar_example();             // = flower(3) with the documented sigma

}  // namespace tracelab::diagram
