#pragma once

#include <string>
#include <vector>

#include "wle/graph.hpp"

namespace wle {

/**
 * Maps element symbols to integer node labels.  The default table covers the
 * organic subset minus boron: C=1, N=2, O=3, S=4, F=5, Cl=6, Br=7, I=8, P=9.
 * Aromatic lowercase atoms resolve to the same label as their uppercase form.
 */
class AtomAlphabet {
 public:
  static AtomAlphabet organic_default();

  // Symbols get consecutive labels starting at 1, in insertion order.
  void add(const std::string& symbol);

  // Throws UnknownAtom for symbols outside the table.
  int label_of(const std::string& symbol) const;

  bool contains(const std::string& symbol) const;
  int size() const { return static_cast<int>(symbols_.size()); }
  const std::vector<std::string>& symbols() const { return symbols_; }

 private:
  std::vector<std::string> symbols_;
};

/**
 * Parses a single-fragment SMILES string into a labeled graph.
 *
 * Supported: organic-subset atoms (plus aromatic lowercase b, c, n, o, p, s),
 * bracket atoms (isotope, charge, H count and chirality are skipped), bond
 * symbols -, =, #, branches, and ring closures including %nn.  Bond orders
 * are recorded as edge metadata; aromatic bonds are stored as order 1.
 *
 * Throws EmptyInput, UnknownAtom, UnbalancedParenthesis, DanglingRingClosure,
 * SmilesSyntaxError.
 */
Graph parse_smiles(const std::string& text,
                   const AtomAlphabet& alphabet = AtomAlphabet::organic_default());

}  // namespace wle
