#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cw/alphabet.hpp"
#include "cw/counted_word.hpp"
#include "cw/counter.hpp"
#include "cw/error.hpp"
#include "cw/system.hpp"

namespace cw {

// ---------------------------------------------------------------------------
// Line-oriented system descriptions:
//
//   state q(1:0)
//   init q(1:0)
//   transition t4: q(2:0) -> q(3:0) forall_l {q(1:0), q(2:0), q(3:0)}
//   bad q(6:1) q(6:1)
//   init_word (q(2:0)=0 | q(1:0) | q(2:0)=0)
//   bad_word (| q(6:1) | q(6:1)>=1) (q(6:1)>=1 | q(6:1) |)
//
// '#' starts a comment and blank lines are skipped.  A state must be
// declared before any line that names it; counted-word literals are the one
// exception — they use the text form of parse_counted_word and are resolved
// against the full alphabet after every declaration has been read.
//
// A `bad` pattern denotes every configuration containing its base as a
// subword: it expands to the base with unconstrained counters, strengthened.
// `bad_word` adds one bad counted word verbatim.  Without an `init_word`
// line the initial set is the single word (cr | init | cr) whose counter cr
// pins every other state to zero occurrences, i.e. every configuration in
// which all processes sit in the initial state.  All initial and bad words
// are stored strengthened, as the symbolic step operators require, and must
// contain their own base in their meaning.
// ---------------------------------------------------------------------------

namespace detail {

struct ModelToken {
  std::string_view text;
  size_t column = 0;  // 1-based
};

// Whitespace separates tokens; '{', '}' and ',' are tokens by themselves so
// witness sets need no spacing discipline.
inline std::vector<ModelToken> model_tokens(std::string_view body) {
  std::vector<ModelToken> out;
  size_t i = 0;
  while (i < body.size()) {
    const char c = body[i];
    if (c == ' ' || c == '\t') {
      ++i;
      continue;
    }
    if (c == '{' || c == '}' || c == ',') {
      out.push_back(ModelToken{body.substr(i, 1), i + 1});
      ++i;
      continue;
    }
    size_t j = i;
    while (j < body.size() && body[j] != ' ' && body[j] != '\t' &&
           body[j] != '{' && body[j] != '}' && body[j] != ',') {
      ++j;
    }
    out.push_back(ModelToken{body.substr(i, j - i), i + 1});
    i = j;
  }
  return out;
}

// Names appear inside counted-word literals and witness sets, so the
// characters those grammars use for their own structure are off limits.
inline bool acceptable_name(std::string_view name) {
  if (name.empty() || name == "eps" || name == "->") {
    return false;
  }
  for (const char c : name) {
    if (c == '{' || c == '}' || c == ',' || c == '|' || c == '=' ||
        c == '#' || c == ' ' || c == '\t') {
      return false;
    }
  }
  return true;
}

inline std::optional<Quant> quant_keyword(std::string_view word) {
  if (word == "exists_l") {
    return Quant::ExistsL;
  }
  if (word == "exists_r") {
    return Quant::ExistsR;
  }
  if (word == "exists_lr") {
    return Quant::ExistsLR;
  }
  if (word == "forall_l") {
    return Quant::ForallL;
  }
  if (word == "forall_r") {
    return Quant::ForallR;
  }
  if (word == "forall_lr") {
    return Quant::ForallLR;
  }
  return std::nullopt;
}

}  // namespace detail

inline ParameterizedSystem parse_model(std::string_view text) {
  using detail::ModelToken;

  std::vector<std::string> names;
  const auto find_name = [&](std::string_view s) -> std::optional<StateId> {
    for (uint32_t i = 0; i < names.size(); ++i) {
      if (names[i] == s) {
        return StateId{i};
      }
    }
    return std::nullopt;
  };
  const auto resolve = [&](const ModelToken& tok, size_t line) -> StateId {
    const std::optional<StateId> q = find_name(tok.text);
    if (!q) {
      throw ParseError(line, tok.column,
                       "unknown state '" + std::string(tok.text) + "'");
    }
    return *q;
  };

  std::optional<StateId> init_state;
  std::vector<Transition> transitions;
  std::vector<Configuration> bad_bases;
  struct PendingWord {
    size_t line;
    size_t column;
    std::string literal;
    bool initial;
  };
  std::vector<PendingWord> pending;

  size_t line_no = 0;
  size_t start = 0;
  while (start <= text.size()) {
    const size_t nl = text.find('\n', start);
    std::string_view raw = text.substr(
        start, nl == std::string_view::npos ? text.size() - start : nl - start);
    ++line_no;
    start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    if (!raw.empty() && raw.back() == '\r') {
      raw.remove_suffix(1);
    }
    const size_t hash = raw.find('#');
    const std::string_view body =
        hash == std::string_view::npos ? raw : raw.substr(0, hash);
    const std::vector<ModelToken> toks = detail::model_tokens(body);
    if (toks.empty()) {
      continue;
    }
    const std::string_view head = toks[0].text;

    if (head == "state") {
      if (toks.size() != 2) {
        throw ParseError(line_no, toks[0].column, "expected: state <name>");
      }
      if (!detail::acceptable_name(toks[1].text)) {
        throw ParseError(
            line_no, toks[1].column,
            "unusable state name '" + std::string(toks[1].text) + "'");
      }
      if (find_name(toks[1].text)) {
        throw ParseError(line_no, toks[1].column,
                         "duplicate state '" + std::string(toks[1].text) + "'");
      }
      names.emplace_back(toks[1].text);
    } else if (head == "init") {
      if (toks.size() != 2) {
        throw ParseError(line_no, toks[0].column, "expected: init <state>");
      }
      if (init_state) {
        throw ParseError(line_no, toks[0].column, "duplicate init declaration");
      }
      init_state = resolve(toks[1], line_no);
    } else if (head == "transition") {
      if (toks.size() < 2) {
        throw ParseError(line_no, toks[0].column, "expected a transition id");
      }
      std::string_view id = toks[1].text;
      size_t next = 2;
      if (id.size() > 1 && id.back() == ':') {
        id.remove_suffix(1);
      } else if (toks.size() > 2 && toks[2].text == ":") {
        next = 3;
      } else {
        throw ParseError(line_no, toks[1].column,
                         "expected ':' after the transition id");
      }
      if (!detail::acceptable_name(id)) {
        throw ParseError(line_no, toks[1].column,
                         "unusable transition id '" + std::string(id) + "'");
      }
      for (const Transition& t : transitions) {
        if (t.id == id) {
          throw ParseError(
              line_no, toks[1].column,
              "duplicate transition id '" + std::string(id) + "'");
        }
      }
      if (toks.size() < next + 3 || toks[next + 1].text != "->") {
        throw ParseError(line_no, toks[0].column,
                         "expected: <source> -> <target>");
      }
      const StateId src = resolve(toks[next], line_no);
      const StateId dst = resolve(toks[next + 2], line_no);
      std::optional<Guard> guard;
      const size_t rest = next + 3;
      if (rest < toks.size()) {
        const std::optional<Quant> quant =
            detail::quant_keyword(toks[rest].text);
        if (!quant) {
          throw ParseError(line_no, toks[rest].column,
                           "expected a guard quantifier (exists_l, exists_r, "
                           "exists_lr, forall_l, forall_r, forall_lr)");
        }
        if (rest + 1 >= toks.size() || toks[rest + 1].text != "{") {
          throw ParseError(line_no,
                           rest + 1 < toks.size() ? toks[rest + 1].column
                                                  : toks[rest].column,
                           "expected '{' after the quantifier");
        }
        std::vector<StateId> witnesses;
        size_t k = rest + 2;
        bool closed = false;
        bool expect_name = true;
        while (k < toks.size()) {
          if (toks[k].text == "}") {
            if (expect_name && !witnesses.empty()) {
              throw ParseError(line_no, toks[k].column, "dangling ','");
            }
            closed = true;
            ++k;
            break;
          }
          if (toks[k].text == ",") {
            if (expect_name) {
              throw ParseError(line_no, toks[k].column, "unexpected ','");
            }
            expect_name = true;
            ++k;
            continue;
          }
          if (!expect_name) {
            throw ParseError(line_no, toks[k].column, "expected ',' or '}'");
          }
          witnesses.push_back(resolve(toks[k], line_no));
          expect_name = false;
          ++k;
        }
        if (!closed) {
          throw ParseError(line_no, toks.back().column, "unclosed '{'");
        }
        if (k != toks.size()) {
          throw ParseError(line_no, toks[k].column,
                           "trailing input after the guard");
        }
        guard = Guard{*quant, std::move(witnesses)};
      }
      transitions.push_back(
          Transition{std::string(id), src, dst, std::move(guard)});
    } else if (head == "bad") {
      if (toks.size() < 2) {
        throw ParseError(line_no, toks[0].column,
                         "expected: bad <state> <state> ...");
      }
      Configuration base;
      for (size_t k = 1; k < toks.size(); ++k) {
        base.push_back(resolve(toks[k], line_no));
      }
      bad_bases.push_back(std::move(base));
    } else if (head == "init_word" || head == "bad_word") {
      const size_t from = toks[0].column - 1 + head.size();
      const std::string_view literal = body.substr(from);
      if (detail::trim(literal).empty()) {
        throw ParseError(line_no, from + 1, "expected a counted-word literal");
      }
      pending.push_back(PendingWord{line_no, from + 1, std::string(literal),
                                    head == "init_word"});
    } else {
      throw ParseError(line_no, toks[0].column,
                       "unknown directive '" + std::string(head) + "'");
    }
  }

  if (names.empty()) {
    throw ParseError(1, 1, "model declares no states");
  }
  if (!init_state) {
    throw ParseError(1, 1, "model has no init declaration");
  }

  ParameterizedSystem sys;
  sys.alphabet = Alphabet(std::move(names));
  sys.transitions = std::move(transitions);
  sys.init_state = *init_state;

  const uint32_t n = sys.alphabet.size();
  for (const Configuration& base : bad_bases) {
    CountedWord w(n);
    for (const StateId q : base) {
      w.push_back(Tuple{Counter::top(n), q, Counter::top(n)});
    }
    sys.bad_set.push_back(strengthen(w));
  }
  for (const PendingWord& p : pending) {
    const CountedWord w =
        parse_counted_word(p.literal, sys.alphabet, p.line, p.column);
    if (w.empty()) {
      throw ParseError(p.line, p.column,
                       "the empty counted word is not usable here");
    }
    std::optional<CountedWord> s = try_strengthen(w);
    if (!s) {
      throw ParseError(p.line, p.column,
                       "counted word denotes nothing: a counter collapses "
                       "under strengthening");
    }
    if (!well_formed(*s)) {
      throw ParseError(p.line, p.column,
                       "counted word's counters reject its own base");
    }
    (p.initial ? sys.init_set : sys.bad_set).push_back(std::move(*s));
  }
  if (sys.init_set.empty()) {
    Counter cr = Counter::all_eq_zero(n);
    cr.set(sys.init_state, Atom::geq(0));
    CountedWord w(n);
    w.push_back(Tuple{cr, sys.init_state, cr});
    sys.init_set.push_back(strengthen(w));
  }
  if (sys.bad_set.empty()) {
    throw ParseError(1, 1, "model declares no bad configurations");
  }
  return sys;
}

}  // namespace cw
