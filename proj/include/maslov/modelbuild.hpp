#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "maslov/games.hpp"
#include "maslov/tournaments.hpp"

namespace maslov {

// Conditions (i)-(iii) on two positions reached after Eloisa rounds.
bool position_equiv(const SatGame& g, const Position& a, const Position& b);

struct PositionColours {
  std::vector<Position> positions;        // P^E in replay order
  std::vector<int> colour_of;             // parallel to positions
  std::vector<std::vector<int>> members;  // per colour, indices into positions; members[c][0] is the representative
  size_t assignments = 0;                 // |F^E|
  double bound = 0;                       // |F^E| * |beta_*| * 2^|atoms|

  int size() const { return static_cast<int>(members.size()); }
  const Position& rep(int c) const { return positions[members[c][0]]; }
};

PositionColours position_colours(const SatGame& g, const StrategyTable& w);

struct SelfDomination {
  int b = -1;                // dominator
  std::vector<int> members;  // B in the order given
  std::vector<int> g;        // slot assigned to each member
};

// Labels of T are slots; colours index `reps`. K is the number of special slots.
std::optional<SelfDomination> find_properly_self_dominating(const ColourfulView& T, const std::vector<int>& B,
                                                            const std::vector<Position>& reps, int K, int max_size);

struct BuildOptions {
  bool verify_tournament = true;  // run verify_paradoxical first
  int jobs = 1;
  uint64_t max_subsets = 50000000;  // guard on Stage 2/3 enumeration
};

struct BuildReport {
  Structure model;
  bool verified = false;  // model_check(model, phi)
  int colours = 0;
  size_t stage2_sets = 0;      // properly self-dominating sets given a hull
  size_t stage2_unmatched = 0;  // left for Stage 3: no equivalent position fits
  size_t stage3_sets = 0;
};

// Stages 1-3 over T (unnamed element i+1 is vertex i).
BuildReport build_model(const SatGame& g, const PositionColours& pc, const ColourfulTournament& T,
                        const BuildOptions& opt = {});

struct WitnessChainGrid {
  int rows = 0, cols = 0;  // k+1 rows, one column per existential variable
  std::vector<std::vector<std::vector<int>>> cells;  // cells[i][j]: vertices
  ColourfulTournament tournament;                     // colours = position colours, labels = slots
};

// Base colours encode (r, i, j) as (r * rows + i) * cols + j; base labels are universal slots.
WitnessChainGrid make_grid(const ColourfulTournament& base, int num_r, int k, int num_exists);

// Same-row arcs point from later to earlier columns, labelled with the earlier column's variable.
bool check_witness_chains(const WitnessChainGrid& grid, int k);

struct ParamShape {
  int k = 0;            // universal slots
  int num_exists = 0;   // existential slots, all after the universals
};
// Throws unless the prefix is a block of universals followed by a block of existentials.
ParamShape param_shape(const SatGame& g);

struct ParamReport {
  BuildReport build;
  WitnessChainGrid grid;
  bool chains_ok = false;
  ParadoxReport base_check;
};

ParamReport build_model_param_skolem(const SatGame& g, const PositionColours& pc, const ColourfulTournament& base,
                                     const BuildOptions& opt = {});

// Whole chain for one sentence: model search, type extraction, game, colours, tournament, stages.
struct PipelineReport {
  bool ok = false;
  std::string stage;  // where it stopped
  std::string detail;
  int K = 0, M = 0;
  int search_size = 0;
  size_t beta_members = 0, beta_ones = 0;
  GameVerdict verdict = GameVerdict::Unknown;
  int colours = 0;
  int vertices = 0;
  int sample_attempts = 0;
  bool grid = false;
  bool verified = false;
  Structure model;
};

struct PipelineOptions {
  uint64_t seed = 1;
  int max_search = 4;
  uint64_t budget = 10000000;
  bool param = false;  // use the witness-chain grid
  int jobs = 1;
};

PipelineReport run_pipeline(const Formula& phi, const PipelineOptions& opt = {});

}  // namespace maslov
