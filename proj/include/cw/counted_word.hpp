#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cw/alphabet.hpp"
#include "cw/counter.hpp"
#include "cw/error.hpp"

namespace cw {

// One position of a counted word: a state plus constraints on the Parikh
// image of whatever lies strictly to its left and strictly to its right.
struct Tuple {
  Counter left;
  StateId state;
  Counter right;

  friend bool operator==(const Tuple&, const Tuple&) = default;
};

// A counted word denotes a set of configurations: those admitting a strictly
// increasing injection of the base such that, at every mapped position, the
// left counter accepts the Parikh image of the configuration's prefix and the
// right counter accepts the image of its suffix.  The empty word denotes all
// configurations, so the alphabet size is stored explicitly.
class CountedWord {
public:
  CountedWord() = default;

  explicit CountedWord(uint32_t alphabet_size) : alphabet_size_(alphabet_size) {}

  CountedWord(uint32_t alphabet_size, std::vector<Tuple> tuples)
      : alphabet_size_(alphabet_size), tuples_(std::move(tuples)) {
    for (const Tuple& t : tuples_) {
      check_tuple(t);
    }
  }

  uint32_t alphabet_size() const { return alphabet_size_; }

  size_t size() const { return tuples_.size(); }
  bool empty() const { return tuples_.empty(); }

  const Tuple& at(size_t i) const { return tuples_.at(i); }
  Tuple& at(size_t i) { return tuples_.at(i); }

  const std::vector<Tuple>& tuples() const { return tuples_; }

  void push_back(Tuple t) {
    check_tuple(t);
    tuples_.push_back(std::move(t));
  }

  Configuration base() const {
    Configuration out;
    out.reserve(tuples_.size());
    for (const Tuple& t : tuples_) {
      out.push_back(t.state);
    }
    return out;
  }

  // Boundary counters; the empty word constrains nothing on either side.
  Counter lc() const {
    return empty() ? Counter::top(alphabet_size_) : tuples_.front().left;
  }

  Counter rc() const {
    return empty() ? Counter::top(alphabet_size_) : tuples_.back().right;
  }

  CountedWord slice(size_t begin, size_t end) const {
    CW_CHECK(begin <= end && end <= tuples_.size(), "slice out of range");
    return CountedWord(
        alphabet_size_,
        std::vector<Tuple>(tuples_.begin() + begin, tuples_.begin() + end));
  }

  friend bool operator==(const CountedWord&, const CountedWord&) = default;

private:
  void check_tuple(const Tuple& t) const {
    CW_CHECK(t.left.alphabet_size() == alphabet_size_ &&
                 t.right.alphabet_size() == alphabet_size_ &&
                 t.state.index < alphabet_size_,
             "tuple does not match the word's alphabet");
  }

  uint32_t alphabet_size_ = 0;
  std::vector<Tuple> tuples_;
};

// parikhs[i] is the Parikh image of w[0..i).
inline std::vector<Multiset> prefix_parikhs(const Configuration& w,
                                            uint32_t alphabet_size) {
  std::vector<Multiset> out;
  out.reserve(w.size() + 1);
  Multiset acc(alphabet_size);
  out.push_back(acc);
  for (StateId q : w) {
    acc.add(q);
    out.push_back(acc);
  }
  return out;
}

// Every counter accepts the Parikh image of the base on its own side.
inline bool well_formed(const CountedWord& phi) {
  const Configuration b = phi.base();
  const std::vector<Multiset> pref = prefix_parikhs(b, phi.alphabet_size());
  const Multiset& total = pref.back();
  for (size_t i = 0; i < phi.size(); ++i) {
    const Tuple& t = phi.at(i);
    if (!t.left.accepts(pref[i])) {
      return false;
    }
    std::optional<Multiset> suff = total.minus(pref[i + 1]);
    if (!suff || !t.right.accepts(*suff)) {
      return false;
    }
  }
  return true;
}

// Membership of a configuration in the denotation.
inline bool models(const Configuration& w, const CountedWord& phi) {
  const uint32_t n = phi.alphabet_size();
  const size_t k = phi.size();
  if (k > w.size()) {
    return false;
  }
  const std::vector<Multiset> pref = prefix_parikhs(w, n);
  const Multiset& total = pref.back();

  // Depth-first search for a strictly increasing injection of the base.
  // next[i] is the next candidate position in w for base position i.
  std::vector<size_t> chosen(k, 0);
  size_t i = 0;
  size_t j = 0;
  while (true) {
    if (i == k) {
      return true;
    }
    bool placed = false;
    for (; j + (k - i) <= w.size(); ++j) {
      if (w[j] != phi.at(i).state) {
        continue;
      }
      if (!phi.at(i).left.accepts(pref[j])) {
        continue;
      }
      std::optional<Multiset> suff = total.minus(pref[j + 1]);
      if (!suff || !phi.at(i).right.accepts(*suff)) {
        continue;
      }
      chosen[i] = j;
      ++i;
      ++j;
      placed = true;
      break;
    }
    if (placed) {
      continue;
    }
    if (i == 0) {
      return false;
    }
    --i;
    j = chosen[i] + 1;
  }
}

namespace detail {

// Backtracking search for the entailment injection, with no cheap-rejection
// prefilters; complete on its own, so callers may skip straight to it after
// running (or deliberately omitting) the filters in entailed_by.
inline bool entailment_injection(const CountedWord& phi,
                                 const CountedWord& stronger) {
  const size_t k = phi.size();
  const size_t m = stronger.size();
  if (k > m) {
    return false;
  }
  std::vector<size_t> chosen(k, 0);
  size_t i = 0;
  size_t j = 0;
  while (true) {
    if (i == k) {
      return true;
    }
    bool placed = false;
    for (; j + (k - i) <= m; ++j) {
      const Tuple& a = phi.at(i);
      const Tuple& b = stronger.at(j);
      if (a.state != b.state || !a.left.entailed_by(b.left) ||
          !a.right.entailed_by(b.right)) {
        continue;
      }
      chosen[i] = j;
      ++i;
      ++j;
      placed = true;
      break;
    }
    if (placed) {
      continue;
    }
    if (i == 0) {
      return false;
    }
    --i;
    j = chosen[i] + 1;
  }
}

}  // namespace detail

// phi <= stronger in the entailment order: some strictly increasing injection
// matches states and entails both counters at every mapped position.  The
// denotation of `stronger` is then contained in the denotation of phi.
inline bool entailed_by(const CountedWord& phi, const CountedWord& stronger) {
  CW_CHECK(phi.alphabet_size() == stronger.alphabet_size(),
           "alphabet size mismatch");
  if (phi.size() > stronger.size()) {
    return false;
  }
  // Cheap rejection: base letter counts must not exceed the target's.
  {
    Multiset a = Multiset::parikh(phi.base(), phi.alphabet_size());
    Multiset b = Multiset::parikh(stronger.base(), phi.alphabet_size());
    if (!a.included_in(b)) {
      return false;
    }
  }
  return detail::entailment_injection(phi, stronger);
}

enum class SweepOrder { LeftFirst, RightFirst };

// Propagates counter information between adjacent positions until a fixpoint:
// both counters of each pair are tightened with what the neighbouring pair
// implies about them.  Returns nullopt if a counter collapses to bottom,
// which cannot happen on well-formed input.  The fixpoint does not depend on
// the sweep order; the knob exists so tests can confirm that.
inline std::optional<CountedWord> try_strengthen(
    CountedWord phi, SweepOrder order = SweepOrder::LeftFirst) {
  const uint32_t n = phi.alphabet_size();
  for (size_t i = 0; i < phi.size(); ++i) {
    if (phi.at(i).left.is_bottom() || phi.at(i).right.is_bottom()) {
      return std::nullopt;
    }
  }
  if (phi.size() < 2) {
    return phi;
  }

  // Tightens the pair at positions (i, i+1); returns {ok, changed}, with ok
  // false on bottom.  The counter algebra acts per state, so the whole update
  // runs atom by atom on the stack; a tightening that empties any component
  // aborts the entire strengthening, which makes partially applied updates
  // harmless.
  auto apply = [&phi, n](size_t i) -> std::pair<bool, bool> {
    Tuple& a = phi.at(i);
    Tuple& b = phi.at(i + 1);
    bool changed = false;
    for (uint32_t s = 0; s < n; ++s) {
      const Atom uq = s == a.state.index ? Atom::eq(1) : Atom::eq(0);
      const Atom uq2 = s == b.state.index ? Atom::eq(1) : Atom::eq(0);
      const Atom al = a.left.at_unchecked(s);
      const Atom ar = a.right.at_unchecked(s);
      const Atom bl = b.left.at_unchecked(s);
      const Atom br = b.right.at_unchecked(s);

      // a.right against b.right + unit(b) + (b.left - (a.left + unit(a))).
      const AtomDiff gap_r = atom_minus(bl, atom_plus(al, uq));
      if (!gap_r.value) {
        return {false, changed};
      }
      const std::optional<Atom> nr =
          atom_meet(ar, atom_plus(atom_plus(br, uq2), *gap_r.value));
      // a.left against b.left - unit(a).
      const AtomDiff l2 = atom_minus(bl, uq);
      if (!l2.value) {
        return {false, changed};
      }
      const std::optional<Atom> nl = atom_meet(al, *l2.value);
      // b.right against a.right - unit(b).
      const AtomDiff rp2 = atom_minus(ar, uq2);
      if (!rp2.value) {
        return {false, changed};
      }
      const std::optional<Atom> nrp = atom_meet(br, *rp2.value);
      // b.left against a.left + unit(a) + (a.right - (b.right + unit(b))).
      const AtomDiff gap_l = atom_minus(ar, atom_plus(br, uq2));
      if (!gap_l.value) {
        return {false, changed};
      }
      const std::optional<Atom> nlp =
          atom_meet(bl, atom_plus(atom_plus(al, uq), *gap_l.value));
      if (!nr || !nl || !nrp || !nlp) {
        return {false, changed};
      }
      if (*nr != ar) {
        a.right.set_unchecked(s, *nr);
        changed = true;
      }
      if (*nl != al) {
        a.left.set_unchecked(s, *nl);
        changed = true;
      }
      if (*nrp != br) {
        b.right.set_unchecked(s, *nrp);
        changed = true;
      }
      if (*nlp != bl) {
        b.left.set_unchecked(s, *nlp);
        changed = true;
      }
    }
    return {true, changed};
  };

  // Chaotic iteration over a worklist of adjacent pairs: each update only
  // tightens, so any fair order reaches the one fixpoint and the order knob
  // merely seeds the queue.  A changed pair re-queues itself (its own new
  // values can tighten it further) and its neighbours (they read the changed
  // tuples).  The pop cap guards against divergence on ill-formed input,
  // which callers filter out anyway.
  const size_t pairs = phi.size() - 1;
  std::vector<size_t> queue;
  std::vector<uint8_t> queued(pairs, 1);
  queue.reserve(pairs + 8);
  if (order == SweepOrder::LeftFirst) {
    for (size_t i = pairs; i-- > 0;) {
      queue.push_back(i);
    }
  } else {
    for (size_t i = 0; i < pairs; ++i) {
      queue.push_back(i);
    }
  }
  const size_t max_pops = 2 * phi.size() * (64 + 8 * phi.size() * n);
  for (size_t pops = 0; !queue.empty(); ++pops) {
    if (pops > max_pops) {
      throw std::logic_error("strengthening did not converge");
    }
    const size_t i = queue.back();
    queue.pop_back();
    queued[i] = 0;
    const auto [ok, changed] = apply(i);
    if (!ok) {
      return std::nullopt;
    }
    if (!changed) {
      continue;
    }
    const size_t lo = i > 0 ? i - 1 : i;
    const size_t hi = i + 1 < pairs ? i + 1 : i;
    for (size_t j : {lo, i, hi}) {
      if (!queued[j]) {
        queued[j] = 1;
        queue.push_back(j);
      }
    }
  }
  return phi;
}

inline CountedWord strengthen(CountedWord phi,
                              SweepOrder order = SweepOrder::LeftFirst) {
  std::optional<CountedWord> out = try_strengthen(std::move(phi), order);
  CW_CHECK(out.has_value(), "strengthening collapsed a counter to bottom");
  return *std::move(out);
}

// Relaxes every counter at the given resolution, then restores the
// strengthened normal form.  Preserves well-formedness.
inline CountedWord relax(const CountedWord& phi, const Resolution& rho) {
  CountedWord out(phi.alphabet_size());
  for (size_t i = 0; i < phi.size(); ++i) {
    const Tuple& t = phi.at(i);
    out.push_back(Tuple{t.left.relax(rho), t.state, t.right.relax(rho)});
  }
  return strengthen(std::move(out));
}

inline std::vector<CountedWord> relax(const std::vector<CountedWord>& set,
                                      const Resolution& rho) {
  std::vector<CountedWord> out;
  out.reserve(set.size());
  for (const CountedWord& phi : set) {
    out.push_back(relax(phi, rho));
  }
  return out;
}

// Pointwise maximum of the precisions of all counters in the word.
inline Multiset precision(const CountedWord& phi) {
  Multiset m(phi.alphabet_size());
  for (size_t i = 0; i < phi.size(); ++i) {
    m = m.max_with(phi.at(i).left.precision());
    m = m.max_with(phi.at(i).right.precision());
  }
  return m;
}

// ---------------------------------------------------------------------------
// Text form.  Atoms print as "q=k" or "q>=k"; trivial lower bounds (>= 0) are
// omitted.  A tuple prints as "(l | q | r)" and the empty word as "eps".

inline std::string to_text(const Counter& cr, const Alphabet& sigma) {
  if (cr.is_bottom()) {
    return "false";
  }
  std::string out;
  for (uint32_t i = 0; i < cr.alphabet_size(); ++i) {
    Atom a = cr.at(StateId{i});
    if (a.is_geq() && a.bound == 0) {
      continue;
    }
    if (!out.empty()) {
      out += ",";
    }
    out += sigma.name(StateId{i});
    out += a.is_eq() ? "=" : ">=";
    out += std::to_string(a.bound);
  }
  return out;
}

inline std::string to_text(const CountedWord& phi, const Alphabet& sigma) {
  if (phi.empty()) {
    return "eps";
  }
  std::string out;
  for (size_t i = 0; i < phi.size(); ++i) {
    const Tuple& t = phi.at(i);
    if (i > 0) {
      out += " ";
    }
    out += "(" + to_text(t.left, sigma) + " | " + sigma.name(t.state) + " | " +
           to_text(t.right, sigma) + ")";
  }
  return out;
}

inline std::string to_text(const Configuration& w, const Alphabet& sigma) {
  std::string out;
  for (size_t i = 0; i < w.size(); ++i) {
    if (i > 0) {
      out += " ";
    }
    out += sigma.name(w[i]);
  }
  return out;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) {
    s.remove_suffix(1);
  }
  return s;
}

inline Atom parse_atom(std::string_view text, const Alphabet& sigma,
                       StateId& q, size_t line, size_t column) {
  size_t eq = text.rfind('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ParseError(line, column, "expected 'state=k' or 'state>=k'");
  }
  bool geq = text[eq - 1] == '>';
  std::string_view name = trim(text.substr(0, geq ? eq - 1 : eq));
  std::string_view num = trim(text.substr(eq + 1));
  std::optional<StateId> found = sigma.find(name);
  if (!found) {
    throw ParseError(line, column,
                     "unknown state '" + std::string(name) + "'");
  }
  if (num.empty()) {
    throw ParseError(line, column, "missing bound");
  }
  uint32_t bound = 0;
  for (char c : num) {
    if (c < '0' || c > '9') {
      throw ParseError(line, column, "bound is not a number");
    }
    bound = bound * 10 + static_cast<uint32_t>(c - '0');
  }
  q = *found;
  return geq ? Atom::geq(bound) : Atom::eq(bound);
}

inline Counter parse_counter(std::string_view text, const Alphabet& sigma,
                             size_t line, size_t column) {
  Counter cr = Counter::top(sigma.size());
  text = trim(text);
  if (text.empty()) {
    return cr;
  }
  size_t start = 0;
  while (start <= text.size()) {
    size_t comma = text.find(',', start);
    std::string_view piece = comma == std::string_view::npos
                                 ? text.substr(start)
                                 : text.substr(start, comma - start);
    StateId q{};
    Atom a = parse_atom(trim(piece), sigma, q, line, column);
    cr.set(q, a);
    if (comma == std::string_view::npos) {
      break;
    }
    start = comma + 1;
  }
  return cr;
}

}  // namespace detail

// Parses the text form produced by to_text.  States whose atom is omitted
// default to the trivial lower bound.  State names may contain parentheses
// (they never contain '|', ',', '=', or whitespace), so fields are split on
// '|' at nesting depth 1 only.  `line` and `column` locate the first
// character of `text` in the surrounding document, so errors point into the
// caller's coordinates.
inline CountedWord parse_counted_word(std::string_view text,
                                      const Alphabet& sigma, size_t line = 1,
                                      size_t column = 1) {
  CountedWord out(sigma.size());
  size_t lead = 0;
  while (lead < text.size() && (text[lead] == ' ' || text[lead] == '\t')) {
    ++lead;
  }
  const size_t base = column + lead;
  std::string_view rest = detail::trim(text);
  if (rest.empty() || rest == "eps") {
    return out;
  }
  size_t pos = 0;
  while (pos < rest.size()) {
    while (pos < rest.size() && (rest[pos] == ' ' || rest[pos] == '\t')) {
      ++pos;
    }
    if (pos >= rest.size()) {
      break;
    }
    if (rest[pos] != '(') {
      throw ParseError(line, base + pos, "expected '('");
    }
    size_t depth = 0;
    size_t end = pos;
    std::vector<size_t> bars;
    for (; end < rest.size(); ++end) {
      if (rest[end] == '(') {
        ++depth;
      } else if (rest[end] == ')') {
        --depth;
        if (depth == 0) {
          break;
        }
      } else if (rest[end] == '|' && depth == 1) {
        bars.push_back(end);
      }
    }
    if (end >= rest.size()) {
      throw ParseError(line, base + pos, "unbalanced '('");
    }
    if (bars.size() != 2) {
      throw ParseError(line, base + pos, "tuple needs two '|' separators");
    }
    std::string_view left = rest.substr(pos + 1, bars[0] - pos - 1);
    std::string_view mid = rest.substr(bars[0] + 1, bars[1] - bars[0] - 1);
    std::string_view right = rest.substr(bars[1] + 1, end - bars[1] - 1);
    std::optional<StateId> q = sigma.find(detail::trim(mid));
    if (!q) {
      throw ParseError(line, base + bars[0] + 1,
                       "unknown state '" + std::string(detail::trim(mid)) + "'");
    }
    out.push_back(Tuple{detail::parse_counter(left, sigma, line, base + pos),
                        *q,
                        detail::parse_counter(right, sigma, line, base + pos)});
    pos = end + 1;
  }
  return out;
}

}  // namespace cw
