#include "tracelab/diagram.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace tracelab::diagram {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::vector<ThetaLabel> canonical_labels(int r) {
  std::vector<ThetaLabel> out;
  out.reserve(2 * static_cast<std::size_t>(std::max(r, 0)));
  for (int j = 1; j <= r; ++j) {
    out.push_back({j, +1});
    out.push_back({j, -1});
  }
  return out;
}

// Position of one bar endpoint on the multi-curve.
struct EndpointRef {
  int comp{-1};
  int pos{-1};
  bool found() const { return comp >= 0; }
};

struct EndpointIndex {
  std::vector<EndpointRef> origin;    // [bar]
  std::vector<EndpointRef> terminus;  // [bar]
  std::vector<int> origin_count;
  std::vector<int> terminus_count;
};

EndpointIndex index_endpoints(const Diagram& d) {
  EndpointIndex ix;
  const std::size_t nbars = static_cast<std::size_t>(std::max(d.r, 0)) + 1;
  ix.origin.resize(nbars);
  ix.terminus.resize(nbars);
  ix.origin_count.assign(nbars, 0);
  ix.terminus_count.assign(nbars, 0);
  for (std::size_t c = 0; c < d.components.size(); ++c) {
    const auto& att = d.components[c].attachments;
    for (std::size_t p = 0; p < att.size(); ++p) {
      const Attachment& a = att[p];
      if (a.bar < 1 || a.bar > d.r) continue;  // reported by validate
      auto& slot = (a.role == Role::origin) ? ix.origin : ix.terminus;
      auto& cnt = (a.role == Role::origin) ? ix.origin_count : ix.terminus_count;
      if (cnt[static_cast<std::size_t>(a.bar)] == 0) {
        slot[static_cast<std::size_t>(a.bar)] = {static_cast<int>(c), static_cast<int>(p)};
      }
      ++cnt[static_cast<std::size_t>(a.bar)];
    }
  }
  return ix;
}

bool endpoints_complete(const Diagram& d, const EndpointIndex& ix) {
  for (int j = 1; j <= d.r; ++j) {
    if (ix.origin_count[static_cast<std::size_t>(j)] != 1) return false;
    if (ix.terminus_count[static_cast<std::size_t>(j)] != 1) return false;
  }
  return true;
}

// The point where the oriented band of label q ends: (j, +) runs into the
// terminus record of bar j, (j, -) runs the bar backwards into its origin.
EndpointRef terminus_point(const EndpointIndex& ix, ThetaLabel q) {
  return q.sign > 0 ? ix.terminus[static_cast<std::size_t>(q.bar)]
                    : ix.origin[static_cast<std::size_t>(q.bar)];
}

std::map<ThetaLabel, ThetaLabel> derive_sigma_indexed(const Diagram& d, const EndpointIndex& ix) {
  std::map<ThetaLabel, ThetaLabel> out;
  for (ThetaLabel q : canonical_labels(d.r)) {
    EndpointRef t = terminus_point(ix, q);
    const auto& att = d.components[static_cast<std::size_t>(t.comp)].attachments;
    const Attachment& next =
        att[(static_cast<std::size_t>(t.pos) + 1) % att.size()];
    out[q] = {next.bar, next.role == Role::origin ? +1 : -1};
  }
  return out;
}

std::string role_str(Role r) { return r == Role::origin ? "origin" : "terminus"; }
std::string side_str(Side s) { return s == Side::left ? "left" : "right"; }

Role parse_role(const std::string& s) {
  if (s == "origin") return Role::origin;
  if (s == "terminus") return Role::terminus;
  throw std::invalid_argument("diagram: bad role '" + s + "' (want origin|terminus)");
}

Side parse_side(const std::string& s) {
  if (s == "left") return Side::left;
  if (s == "right") return Side::right;
  throw std::invalid_argument("diagram: bad side '" + s + "' (want left|right)");
}

}  // namespace

ThetaLabel parse_label(const std::string& s) {
  if (s.size() < 2) throw std::invalid_argument("diagram: bad label '" + s + "'");
  char tail = s.back();
  if (tail != '+' && tail != '-')
    throw std::invalid_argument("diagram: label '" + s + "' must end in + or -");
  int bar = 0;
  try {
    std::size_t used = 0;
    bar = std::stoi(s.substr(0, s.size() - 1), &used);
    if (used != s.size() - 1) throw std::invalid_argument("trailing junk");
  } catch (const std::exception&) {
    throw std::invalid_argument("diagram: label '" + s + "' has no valid bar number");
  }
  if (bar < 1) throw std::invalid_argument("diagram: label '" + s + "' has bar < 1");
  return {bar, tail == '+' ? +1 : -1};
}

std::vector<std::string> validate(const Diagram& d) {
  std::vector<std::string> errs;
  if (d.r < 0) {
    errs.push_back("r must be >= 0");
    return errs;
  }
  if (d.r == 0) {
    if (d.components.size() != 1 || !d.components[0].attachments.empty())
      errs.push_back("r = 0 admits exactly one component with no attachments (a plain loop)");
    if (!d.sigma.empty()) errs.push_back("r = 0 diagram must have empty sigma");
    if (!d.signs.empty()) errs.push_back("r = 0 diagram must have empty signs");
    return errs;
  }

  // component ids and attachment basics
  {
    std::map<std::string, int> seen;
    for (std::size_t c = 0; c < d.components.size(); ++c) {
      const auto& comp = d.components[c];
      if (comp.id.empty())
        errs.push_back("component " + std::to_string(c) + " has an empty id");
      else if (++seen[comp.id] == 2)
        errs.push_back("duplicate component id '" + comp.id + "'");
      if (comp.attachments.empty())
        errs.push_back("component '" + comp.id +
                       "' has no attachments; every component must meet at least one bar");
      for (const Attachment& a : comp.attachments)
        if (a.bar < 1 || a.bar > d.r)
          errs.push_back("component '" + comp.id + "' references bar " +
                         std::to_string(a.bar) + " outside 1.." + std::to_string(d.r));
    }
    if (d.components.empty()) errs.push_back("diagram with r >= 1 has no components");
  }

  EndpointIndex ix = index_endpoints(d);
  for (int j = 1; j <= d.r; ++j) {
    int o = ix.origin_count[static_cast<std::size_t>(j)];
    int t = ix.terminus_count[static_cast<std::size_t>(j)];
    if (o != 1)
      errs.push_back("bar " + std::to_string(j) + " has " + std::to_string(o) +
                     " origin records (expected exactly 1)");
    if (t != 1)
      errs.push_back("bar " + std::to_string(j) + " has " + std::to_string(t) +
                     " terminus records (expected exactly 1)");
  }

  // signs: each bar carries one + and one - label, keyed canonically
  {
    auto want = canonical_labels(d.r);
    for (ThetaLabel q : want) {
      auto it = d.signs.find(q);
      if (it == d.signs.end())
        errs.push_back("signs map is missing label " + q.str());
      else if (it->second != q.sign)
        errs.push_back("sign imbalance for bar " + std::to_string(q.bar) + ": label " +
                       q.str() + " stored with sign " + (it->second > 0 ? "+" : "-"));
    }
    for (const auto& [q, s] : d.signs) {
      (void)s;
      if (q.bar < 1 || q.bar > d.r)
        errs.push_back("signs map has stray label " + q.str());
    }
  }

  // sigma: bijection on the 2r labels, equal to the attachment-derived traversal
  {
    auto want = canonical_labels(d.r);
    bool keys_ok = true;
    for (ThetaLabel q : want) {
      if (!d.sigma.count(q)) {
        errs.push_back("sigma is missing label " + q.str());
        keys_ok = false;
      }
    }
    for (const auto& [q, img] : d.sigma) {
      if (q.bar < 1 || q.bar > d.r) {
        errs.push_back("sigma has stray label " + q.str());
        keys_ok = false;
      }
      if (img.bar < 1 || img.bar > d.r) {
        errs.push_back("sigma maps " + q.str() + " to stray label " + img.str());
        keys_ok = false;
      }
    }
    if (keys_ok) {
      std::map<ThetaLabel, int> hit;
      for (const auto& [q, img] : d.sigma) (void)q, ++hit[img];
      for (ThetaLabel q : want)
        if (hit[q] != 1) {
          errs.push_back("sigma is not a bijection: label " + q.str() + " is hit " +
                         std::to_string(hit[q]) + " times");
          keys_ok = false;
        }
    }
    if (keys_ok && endpoints_complete(d, ix)) {
      auto derived = derive_sigma_indexed(d, ix);
      for (ThetaLabel q : want) {
        ThetaLabel got = d.sigma.at(q);
        ThetaLabel want_img = derived.at(q);
        if (got != want_img)
          errs.push_back("broken cycle at label " + q.str() + ": stored sigma sends it to " +
                         got.str() + " but the attachment order gives " + want_img.str());
      }
    }
  }
  return errs;
}

void ensure_valid(const Diagram& d) {
  auto errs = validate(d);
  if (errs.empty()) return;
  std::ostringstream os;
  os << "invalid diagram:";
  for (const auto& e : errs) os << "\n  - " << e;
  throw std::invalid_argument(os.str());
}

std::map<ThetaLabel, ThetaLabel> derived_sigma(const Diagram& d) {
  EndpointIndex ix = index_endpoints(d);
  if (!endpoints_complete(d, ix))
    throw std::invalid_argument("derived_sigma: diagram has missing or duplicated bar endpoints");
  return derive_sigma_indexed(d, ix);
}

std::vector<std::vector<ThetaLabel>> loop_cycles(const Diagram& d) {
  if (d.r == 0) return {};
  auto sig = derived_sigma(d);
  std::vector<std::vector<ThetaLabel>> cycles;
  std::map<ThetaLabel, bool> used;
  for (ThetaLabel q0 : canonical_labels(d.r)) {
    if (used[q0]) continue;
    std::vector<ThetaLabel> cyc;
    ThetaLabel q = q0;
    do {
      cyc.push_back(q);
      used[q] = true;
      q = sig.at(q);
    } while (q != q0);
    cycles.push_back(std::move(cyc));
  }
  return cycles;
}

std::vector<TraversalEntry> relabel(const Diagram& d, ThetaLabel q0) {
  if (q0.bar < 1 || q0.bar > d.r)
    throw std::invalid_argument("relabel: start label " + q0.str() + " outside this diagram");
  auto sig = derived_sigma(d);
  std::vector<TraversalEntry> out;
  ThetaLabel q = q0;
  do {
    out.push_back({q.bar, q.sign});
    q = sig.at(q);
  } while (q != q0);
  return out;
}

Signature filling_signature(const Diagram& d) {
  ensure_valid(d);
  if (d.r == 0) return {0, 2};  // annulus around a plain loop

  // Ribbon graph: one trivalent vertex per attachment record, one edge per
  // bar, one edge per arc between consecutive records on a component.  Count
  // boundary circles as orbits of (rotation o edge-flip) on half-edges.
  struct HalfEdges {
    int out{-1}, in{-1}, bar{-1};
  };
  std::vector<std::vector<HalfEdges>> at(d.components.size());
  int nh = 0;
  std::vector<int> alpha;
  auto fresh = [&nh]() { return nh++; };

  for (std::size_t c = 0; c < d.components.size(); ++c) {
    at[c].resize(d.components[c].attachments.size());
    std::size_t m = at[c].size();
    for (std::size_t p = 0; p < m; ++p) {
      int tail = fresh();
      int head = fresh();
      at[c][p].out = tail;
      at[c][(p + 1) % m].in = head;
      alpha.resize(static_cast<std::size_t>(nh), -1);
      alpha[static_cast<std::size_t>(tail)] = head;
      alpha[static_cast<std::size_t>(head)] = tail;
    }
  }
  EndpointIndex ix = index_endpoints(d);
  for (int j = 1; j <= d.r; ++j) {
    EndpointRef o = ix.origin[static_cast<std::size_t>(j)];
    EndpointRef t = ix.terminus[static_cast<std::size_t>(j)];
    int ho = fresh();
    int ht = fresh();
    at[static_cast<std::size_t>(o.comp)][static_cast<std::size_t>(o.pos)].bar = ho;
    at[static_cast<std::size_t>(t.comp)][static_cast<std::size_t>(t.pos)].bar = ht;
    alpha.resize(static_cast<std::size_t>(nh), -1);
    alpha[static_cast<std::size_t>(ho)] = ht;
    alpha[static_cast<std::size_t>(ht)] = ho;
  }

  // Counterclockwise rotation at a record: with the band leaving to the left
  // the order is (out, bar, in); to the right it is (out, in, bar).
  std::vector<int> rot(static_cast<std::size_t>(nh), -1);
  for (std::size_t c = 0; c < d.components.size(); ++c) {
    for (std::size_t p = 0; p < at[c].size(); ++p) {
      const HalfEdges& h = at[c][p];
      if (d.components[c].attachments[p].side == Side::left) {
        rot[static_cast<std::size_t>(h.out)] = h.bar;
        rot[static_cast<std::size_t>(h.bar)] = h.in;
        rot[static_cast<std::size_t>(h.in)] = h.out;
      } else {
        rot[static_cast<std::size_t>(h.out)] = h.in;
        rot[static_cast<std::size_t>(h.in)] = h.bar;
        rot[static_cast<std::size_t>(h.bar)] = h.out;
      }
    }
  }

  std::vector<bool> seen(static_cast<std::size_t>(nh), false);
  int faces = 0;
  for (int h0 = 0; h0 < nh; ++h0) {
    if (seen[static_cast<std::size_t>(h0)]) continue;
    ++faces;
    int h = h0;
    do {
      seen[static_cast<std::size_t>(h)] = true;
      h = rot[static_cast<std::size_t>(alpha[static_cast<std::size_t>(h)])];
    } while (h != h0);
  }

  int twice_g = d.r + 2 - faces;
  if (twice_g < 0 || twice_g % 2 != 0)
    throw std::runtime_error("filling_signature: boundary walk gave n = " +
                             std::to_string(faces) + " with r = " + std::to_string(d.r) +
                             ", which is not a closed orientable filling");
  return {twice_g / 2, faces};
}

std::map<std::string, std::vector<ThetaLabel>> theta_support(const Diagram& d) {
  ensure_valid(d);
  std::map<std::string, std::vector<ThetaLabel>> out;
  for (const auto& comp : d.components) out[comp.id];  // every component present
  if (d.r == 0) return out;
  EndpointIndex ix = index_endpoints(d);
  for (ThetaLabel q : canonical_labels(d.r)) {
    EndpointRef t = terminus_point(ix, q);
    out[d.components[static_cast<std::size_t>(t.comp)].id].push_back(q);
  }
  return out;
}

Diagram from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("diagram: malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("diagram: top level must be an object");
  Diagram d;
  if (!j.contains("r") || !j["r"].is_number_integer())
    throw std::invalid_argument("diagram: missing integer field 'r'");
  d.r = j["r"].get<int>();
  if (!j.contains("components") || !j["components"].is_array())
    throw std::invalid_argument("diagram: missing array field 'components'");
  for (const auto& jc : j["components"]) {
    Component comp;
    if (!jc.contains("id") || !jc["id"].is_string())
      throw std::invalid_argument("diagram: component without string 'id'");
    comp.id = jc["id"].get<std::string>();
    if (!jc.contains("attachments") || !jc["attachments"].is_array())
      throw std::invalid_argument("diagram: component '" + comp.id + "' without 'attachments'");
    for (const auto& ja : jc["attachments"]) {
      Attachment a;
      if (!ja.contains("bar") || !ja["bar"].is_number_integer())
        throw std::invalid_argument("diagram: attachment without integer 'bar'");
      a.bar = ja["bar"].get<int>();
      if (!ja.contains("role") || !ja["role"].is_string())
        throw std::invalid_argument("diagram: attachment without 'role'");
      a.role = parse_role(ja["role"].get<std::string>());
      if (!ja.contains("side") || !ja["side"].is_string())
        throw std::invalid_argument("diagram: attachment without 'side'");
      a.side = parse_side(ja["side"].get<std::string>());
      comp.attachments.push_back(a);
    }
    d.components.push_back(std::move(comp));
  }
  if (d.r > 0) {
    if (!j.contains("sigma") || !j["sigma"].is_array())
      throw std::invalid_argument("diagram: missing array field 'sigma'");
    auto order = canonical_labels(d.r);
    const auto& js = j["sigma"];
    if (js.size() != order.size())
      throw std::invalid_argument("diagram: sigma must list " + std::to_string(order.size()) +
                                  " image labels in canonical label order");
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (!js[i].is_string())
        throw std::invalid_argument("diagram: sigma entries must be label strings");
      d.sigma[order[i]] = parse_label(js[i].get<std::string>());
    }
    if (!j.contains("signs") || !j["signs"].is_object())
      throw std::invalid_argument("diagram: missing object field 'signs'");
    for (const auto& [k, v] : j["signs"].items()) {
      if (!v.is_string() || (v.get<std::string>() != "+" && v.get<std::string>() != "-"))
        throw std::invalid_argument("diagram: signs['" + k + "'] must be \"+\" or \"-\"");
      d.signs[parse_label(k)] = v.get<std::string>() == "+" ? +1 : -1;
    }
  }
  ensure_valid(d);
  return d;
}

Diagram load_diagram(const std::string& path) {
  std::ostringstream buf;
  {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("diagram: cannot open " + path);
    buf << in.rdbuf();
  }
  return from_json_text(buf.str());
}

std::string to_json_text(const Diagram& d) {
  ordered_json j;
  j["r"] = d.r;
  j["components"] = ordered_json::array();
  for (const auto& comp : d.components) {
    ordered_json jc;
    jc["id"] = comp.id;
    jc["attachments"] = ordered_json::array();
    for (const Attachment& a : comp.attachments) {
      ordered_json ja;
      ja["bar"] = a.bar;
      ja["role"] = role_str(a.role);
      ja["side"] = side_str(a.side);
      jc["attachments"].push_back(std::move(ja));
    }
    j["components"].push_back(std::move(jc));
  }
  if (d.r > 0) {
    ordered_json js = ordered_json::array();
    for (ThetaLabel q : canonical_labels(d.r)) js.push_back(d.sigma.at(q).str());
    j["sigma"] = std::move(js);
    ordered_json jg;
    for (ThetaLabel q : canonical_labels(d.r))
      jg[q.str()] = d.signs.at(q) > 0 ? "+" : "-";
    j["signs"] = std::move(jg);
  }
  return j.dump(2) + "\n";
}

namespace {

Diagram finish(Diagram d) {
  for (ThetaLabel q : canonical_labels(d.r)) d.signs[q] = q.sign;
  d.sigma = derived_sigma(d);
  ensure_valid(d);
  return d;
}

}  // namespace

Diagram figure_eight() {
  // lam1 carries the bar's origin, so its loop length is theta(1-) and
  // lam2's is theta(1+).
  Diagram d;
  d.r = 1;
  d.components.push_back({"lam1", {{1, Role::origin, Side::left}}});
  d.components.push_back({"lam2", {{1, Role::terminus, Side::left}}});
  return finish(std::move(d));
}

Diagram once_holed_torus() {
  // One component crossed by its own bar with the band switching sides: the
  // thickening is a one-holed torus and sigma splits into two fixed points,
  // one per loop of the transverse pair.
  Diagram d;
  d.r = 1;
  d.components.push_back(
      {"lam1", {{1, Role::origin, Side::left}, {1, Role::terminus, Side::right}}});
  return finish(std::move(d));
}

Diagram flower(int r) {
  if (r < 1) throw std::invalid_argument("flower: need r >= 1");
  Diagram d;
  d.r = r;
  Component core{"core", {}};
  for (int j = 1; j <= r; ++j) core.attachments.push_back({j, Role::terminus, Side::left});
  d.components.push_back(std::move(core));
  for (int j = 1; j <= r; ++j)
    d.components.push_back(
        {"petal" + std::to_string(j), {{j, Role::origin, Side::left}}});
  return finish(std::move(d));
}

Diagram three_bar_example() {
  // Core carries the three termini in cyclic order; petals are listed with
  // the bar numbering that makes the traversal read
  // (1+)(2-)(2+)(3-)(3+)(1-).
  Diagram d;
  d.r = 3;
  d.components.push_back({"lam1",
                          {{1, Role::terminus, Side::left},
                           {2, Role::terminus, Side::left},
                           {3, Role::terminus, Side::left}}});
  d.components.push_back({"lam2", {{2, Role::origin, Side::left}}});
  d.components.push_back({"lam3", {{3, Role::origin, Side::left}}});
  d.components.push_back({"lam4", {{1, Role::origin, Side::left}}});
  return finish(std::move(d));
}

}  // namespace tracelab::diagram
