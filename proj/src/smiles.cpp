#include "wle/smiles.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>

#include "wle/errors.hpp"

namespace wle {

AtomAlphabet AtomAlphabet::organic_default() {
  AtomAlphabet a;
  for (const char* s : {"C", "N", "O", "S", "F", "Cl", "Br", "I", "P"})
    a.add(s);
  return a;
}

void AtomAlphabet::add(const std::string& symbol) {
  if (!contains(symbol)) symbols_.push_back(symbol);
}

int AtomAlphabet::label_of(const std::string& symbol) const {
  for (size_t i = 0; i < symbols_.size(); ++i)
    if (symbols_[i] == symbol) return static_cast<int>(i) + 1;
  throw UnknownAtom("atom symbol '" + symbol + "' not in alphabet");
}

bool AtomAlphabet::contains(const std::string& symbol) const {
  return std::find(symbols_.begin(), symbols_.end(), symbol) != symbols_.end();
}

namespace {

bool is_aromatic_organic(char c) {
  return c == 'b' || c == 'c' || c == 'n' || c == 'o' || c == 'p' || c == 's';
}

// Two-letter organic-subset symbols checked before single letters.
bool is_two_letter_organic(char a, char b) {
  return (a == 'C' && b == 'l') || (a == 'B' && b == 'r');
}

bool is_single_letter_organic(char c) {
  return c == 'B' || c == 'C' || c == 'N' || c == 'O' || c == 'P' ||
         c == 'S' || c == 'F' || c == 'I';
}

std::string uppercase_symbol(const std::string& s) {
  std::string out = s;
  out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  return out;
}

struct RingOpen {
  int atom;
  int bond_order;  // 0 when no explicit symbol preceded the digit
};

class Parser {
 public:
  Parser(const std::string& text, const AtomAlphabet& alphabet)
      : text_(text), alphabet_(alphabet) {}

  Graph run() {
    while (pos_ < text_.size()) step();
    if (!branch_stack_.empty())
      throw UnbalancedParenthesis("unclosed '(' in input");
    if (!rings_.empty())
      throw DanglingRingClosure("ring bond " + std::to_string(rings_.begin()->first) +
                                " never closed");
    if (pending_bond_ != 0)
      throw SmilesSyntaxError("trailing bond symbol");
    if (labels_.empty()) throw EmptyInput("no atoms in input");
    return build_graph(static_cast<int>(labels_.size()), labels_, edges_,
                       alphabet_.size(), orders_);
  }

 private:
  void step() {
    char c = text_[pos_];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++pos_;
      return;
    }
    switch (c) {
      case '-': set_bond(1); return;
      case '=': set_bond(2); return;
      case '#': set_bond(3); return;
      case '(':
        if (prev_ < 0) throw SmilesSyntaxError("branch before any atom");
        branch_stack_.push_back(prev_);
        ++pos_;
        return;
      case ')':
        if (branch_stack_.empty())
          throw UnbalancedParenthesis("')' without matching '('");
        prev_ = branch_stack_.back();
        branch_stack_.pop_back();
        ++pos_;
        return;
      case '.':
        throw SmilesSyntaxError("multi-fragment input not supported");
      case '%': {
        if (pos_ + 2 >= text_.size() ||
            !std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])) ||
            !std::isdigit(static_cast<unsigned char>(text_[pos_ + 2])))
          throw SmilesSyntaxError("'%' must be followed by two digits");
        int num = (text_[pos_ + 1] - '0') * 10 + (text_[pos_ + 2] - '0');
        pos_ += 3;
        ring_bond(num);
        return;
      }
      case '[':
        add_atom(read_bracket_atom());
        return;
      default:
        break;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      ++pos_;
      ring_bond(c - '0');
      return;
    }
    if (pos_ + 1 < text_.size() && is_two_letter_organic(c, text_[pos_ + 1])) {
      pos_ += 2;
      add_atom(std::string(1, c) + text_[pos_ - 1]);
      return;
    }
    if (is_single_letter_organic(c)) {
      ++pos_;
      add_atom(std::string(1, c));
      return;
    }
    if (is_aromatic_organic(c)) {
      ++pos_;
      add_atom(uppercase_symbol(std::string(1, c)));
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)))
      throw UnknownAtom("atom symbol '" + std::string(1, c) + "' not recognized");
    throw SmilesSyntaxError("unexpected character '" + std::string(1, c) + "'");
  }

  void set_bond(int order) {
    if (pending_bond_ != 0) throw SmilesSyntaxError("consecutive bond symbols");
    if (prev_ < 0) throw SmilesSyntaxError("bond symbol before any atom");
    pending_bond_ = order;
    ++pos_;
  }

  // Element symbol of a bracket atom; isotope digits, H count, charge and
  // chirality marks are accepted and discarded.
  std::string read_bracket_atom() {
    size_t end = text_.find(']', pos_);
    if (end == std::string::npos)
      throw SmilesSyntaxError("unterminated bracket atom");
    size_t p = pos_ + 1;
    while (p < end && std::isdigit(static_cast<unsigned char>(text_[p]))) ++p;
    if (p >= end) throw SmilesSyntaxError("bracket atom without element");
    std::string symbol;
    char first = text_[p];
    if (std::isupper(static_cast<unsigned char>(first))) {
      symbol += first;
      if (p + 1 < end && std::islower(static_cast<unsigned char>(text_[p + 1])))
        symbol += text_[p + 1];
    } else if (is_aromatic_organic(first)) {
      symbol = uppercase_symbol(std::string(1, first));
    } else {
      throw UnknownAtom("bad element in bracket atom");
    }
    pos_ = end + 1;
    return symbol;
  }

  void add_atom(const std::string& symbol) {
    int label = alphabet_.label_of(symbol);
    int idx = static_cast<int>(labels_.size());
    labels_.push_back(label);
    if (prev_ >= 0) {
      edges_.push_back({prev_, idx});
      orders_.push_back(pending_bond_ == 0 ? 1 : pending_bond_);
    }
    pending_bond_ = 0;
    prev_ = idx;
  }

  void ring_bond(int num) {
    if (prev_ < 0) throw SmilesSyntaxError("ring closure before any atom");
    auto it = rings_.find(num);
    if (it == rings_.end()) {
      rings_[num] = {prev_, pending_bond_};
      pending_bond_ = 0;
      return;
    }
    RingOpen open = it->second;
    rings_.erase(it);
    if (open.atom == prev_)
      throw SmilesSyntaxError("ring closure to the same atom");
    if (open.bond_order != 0 && pending_bond_ != 0 &&
        open.bond_order != pending_bond_)
      throw SmilesSyntaxError("conflicting bond orders on ring closure");
    int order = open.bond_order != 0 ? open.bond_order
                : pending_bond_ != 0 ? pending_bond_
                                     : 1;
    edges_.push_back({open.atom, prev_});
    orders_.push_back(order);
    pending_bond_ = 0;
  }

  const std::string& text_;
  const AtomAlphabet& alphabet_;
  size_t pos_ = 0;
  int prev_ = -1;
  int pending_bond_ = 0;
  std::vector<int> labels_;
  std::vector<std::array<int, 2>> edges_;
  std::vector<int> orders_;
  std::vector<int> branch_stack_;
  std::map<int, RingOpen> rings_;
};

}  // namespace

Graph parse_smiles(const std::string& text, const AtomAlphabet& alphabet) {
  if (text.find_first_not_of(" \t\r\n") == std::string::npos)
    throw EmptyInput("empty SMILES string");
  return Parser(text, alphabet).run();
}

}  // namespace wle
