#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "maslov/fragments.hpp"
#include "maslov/types.hpp"

namespace maslov {

// Game state after round t. Slots are x_1..x_K, y_1..y_t; f maps slots to elements.
// t == -1 is the empty position before Abelard's opening.
struct Position {
  int t = -1;
  Structure L;
  std::vector<int> f;
  std::vector<int> ones;  // 1-type id (in the game's TypeIndex) of each unnamed element

  int k() const { return L.unnamed; }
  std::string key() const;
};

enum class Player { Abelard, Eloisa, None };
enum class GameVerdict { EloisaWins, AbelardWins, Unknown };

std::string verdict_name(GameVerdict v);

// Memoryless strategy: Eloisa-to-move position key -> chosen successor.
struct StrategyTable {
  std::map<std::string, Position> moves;
  const Position* lookup(const Position& p) const;
  size_t size() const { return moves.size(); }
};

struct GameResult {
  GameVerdict verdict = GameVerdict::Unknown;
  StrategyTable strategy;                  // on a win
  std::map<std::string, Position> refute;  // on a loss: Abelard's choice at each reachable node
  std::vector<Position> line;              // on a loss: one defeating play, opening first
  uint64_t nodes = 0;
};

class BetaNotClosed : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// SAT(phi, beta) for one prenex Kbar sentence. Symbols are matched to beta's signature by name.
class SatGame {
 public:
  SatGame(const Prenex& pre, OuterTypeSet beta);
  SatGame(const SatGame&) = delete;
  SatGame& operator=(const SatGame&) = delete;

  const Prenex& prenex() const { return pre_; }
  const OuterTypeSet& beta() const { return beta_; }
  const TypeIndex& index() const { return ix_; }
  int K() const { return pre_.K(); }
  int M() const { return pre_.M(); }
  int slots() const { return K() + M(); }
  Op quantifier(int slot) const { return slot < K() ? Op::Forall : pre_.word[slot - K()].q; }
  int slot_of_var(int var) const;  // -1 if var is not quantified in the prefix

  Position root() const;
  Player mover(const Position& p) const;

  // reduced = one Eloisa move per (1-type, truth values of the atoms her move fixes);
  // moves in the same group lead to subgames with equal outcomes.
  std::vector<Position> legal_moves(const Position& p, bool reduced = false) const;

  // psi under (L, f) at order M.
  bool eloisa_won(const Position& p) const;
  // Truth of one matrix atom under p; Undef if some argument slot is unassigned or undefined in L.
  Truth atom_truth(const Position& p, const NodePtr& atom) const;

  const std::vector<NodePtr>& atoms() const { return atoms_; }
  // Slots occurring in each atom, parallel to atoms().
  const std::vector<std::vector<int>>& atom_slots() const { return atom_slots_; }

  GameResult solve(uint64_t budget = 10000000) const;

  // Every position reached right after an Eloisa round when she follows w against all
  // Abelard moves; throws if w has no entry somewhere or a final position loses.
  std::vector<Position> eloisa_positions(const StrategyTable& w) const;

  // Evaluates atom with slot values drawn from vals (0 = unassigned) in structure S.
  Truth eval_atom(const Structure& S, const NodePtr& atom, const std::vector<int>& vals) const;

 private:
  Prenex pre_;
  OuterTypeSet beta_;
  TypeIndex ix_;
  std::vector<int> slot_of_var_;
  std::vector<int> rel_map_, const_map_;
  std::vector<NodePtr> atoms_;
  std::vector<std::vector<int>> atom_slots_;
  std::vector<std::vector<const Structure*>> grade_;  // members by grade

  void opening_moves(std::vector<Position>& out) const;
  void abelard_moves(const Position& p, std::vector<Position>& out) const;
  void eloisa_moves(const Position& p, bool reduced, std::vector<Position>& out) const;
  bool eval(const NodePtr& n, const Structure& L, const std::vector<int>& f) const;
  friend class Solver;
};

Structure add_element(const Structure& L, const Structure& one);
// Copies the full-overlap atoms of outer-type c onto the elements s (c's i -> s[i-1]).
void write_hull(Structure& L, const std::vector<int>& s, const Structure& c);

// The ~_f relation on 1-types; f covers slots x_1..x_K, y_1..y_t with y_t existential.
bool type_equiv(const SatGame& g, const Structure& a1, const Structure& a2, const std::vector<int>& f);

struct ReduceResult {
  OuterTypeSet beta;
  size_t ones_before = 0, ones_after = 0;
  size_t assignments = 0;  // |F^E| used for the choice functions
  GameResult resolved;     // solver rerun on the reduced set
};

// Replaces 1-types by least representatives of their ~_f classes over every f reached by w.
ReduceResult reduce_type_set(const SatGame& g, const StrategyTable& w, uint64_t budget = 10000000);

struct ConjunctionResult {
  GameVerdict verdict = GameVerdict::Unknown;
  std::vector<Prenex> parts;
  std::vector<GameResult> results;
  int losing_part = -1;
};

// SAT+ : Abelard first picks a conjunct, then the game runs on it over the shared beta.
ConjunctionResult solve_conjunction(const Formula& phi, const OuterTypeSet& beta, uint64_t budget = 10000000);

}  // namespace maslov
