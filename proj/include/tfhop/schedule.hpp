#pragma once

#include <iosfwd>
#include <vector>

#include "tfhop/actions.hpp"
#include "tfhop/mixed_strategy.hpp"

namespace tfhop {

struct ChirpEntry {
  int a = 1;          // subband index, 1-based
  int b = 1;          // slot index, 1-based
  double f_hz = 0.0;
  double t_s = 0.0;   // start offset within the PRI
};

// Per-CPI transmission plan: exactly K entries, each on the action grid.
struct ChirpSchedule {
  std::vector<ChirpEntry> entries;
  int size() const { return static_cast<int>(entries.size()); }
  const ChirpEntry& at(int chirp) const { return entries[static_cast<std::size_t>(chirp) - 1]; }  // 1-based
};

// Stochastic round-robin sampler: one start pair per block of `block_len`
// chirps drawn from q, then modular cycling (s+l) mod A_f / mod A_t within the
// block (0-based internally, 1-based exposed). The last block truncates so the
// schedule is always exactly `chirp_count` long.
ChirpSchedule stochastic_round_robin(const MixedStrategy& q, const ActionSpace& space,
                                     int block_len, int chirp_count, Rng& rng);

// Deterministic variant: every block starts from the same flat action
// (1-based). Used by the fixed-assignment baseline and counterfactual replay.
ChirpSchedule cyclic_schedule(int start_flat, const ActionSpace& space, int block_len,
                              int chirp_count);

// Flat action index (1-based) of each chirp.
std::vector<int> flat_actions(const ChirpSchedule& s, const ActionSpace& space);
ChirpSchedule schedule_from_flat(const std::vector<int>& flat, const ActionSpace& space);

// CSV dump with columns chirp,a,b,f_hz,t_s.
void write_schedule_csv(std::ostream& os, const ChirpSchedule& s);

}  // namespace tfhop
