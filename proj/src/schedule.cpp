#include "tfhop/schedule.hpp"

#include <functional>
#include <ostream>
#include <stdexcept>

namespace tfhop {

namespace {

ChirpEntry entry_from_indices(int a0, int b0, const ActionSpace& space) {
  const JointAction& act = space.at(space.flat_index(a0 + 1, b0 + 1));
  return {act.a, act.b, act.f_hz, act.t_s};
}

ChirpSchedule unroll(int chirp_count, int block_len, const ActionSpace& space,
                     const std::function<int()>& draw_start_flat) {
  if (chirp_count < 1) throw std::invalid_argument("schedule: chirp count must be >= 1");
  if (block_len < 1) throw std::invalid_argument("schedule: block length must be >= 1");
  const int a_f = space.subband_count();
  const int a_t = space.slot_count();
  ChirpSchedule sched;
  sched.entries.reserve(static_cast<std::size_t>(chirp_count));
  int k = 0;
  while (k < chirp_count) {
    int start = draw_start_flat();  // 1-based flat
    const JointAction& act = space.at(start);
    int s_f = act.a - 1;
    int s_t = act.b - 1;
    for (int l = 0; l < block_len && k < chirp_count; ++l, ++k) {
      sched.entries.push_back(entry_from_indices((s_f + l) % a_f, (s_t + l) % a_t, space));
    }
  }
  return sched;
}

}  // namespace

ChirpSchedule stochastic_round_robin(const MixedStrategy& q, const ActionSpace& space,
                                     int block_len, int chirp_count, Rng& rng) {
  if (q.size() != space.size())
    throw std::invalid_argument("stochastic_round_robin: strategy size != action space size");
  return unroll(chirp_count, block_len, space,
                [&]() { return sample_index(q, rng) + 1; });
}

ChirpSchedule cyclic_schedule(int start_flat, const ActionSpace& space, int block_len,
                              int chirp_count) {
  if (start_flat < 1 || start_flat > space.size())
    throw std::invalid_argument("cyclic_schedule: start action out of range");
  return unroll(chirp_count, block_len, space, [=]() { return start_flat; });
}

std::vector<int> flat_actions(const ChirpSchedule& s, const ActionSpace& space) {
  std::vector<int> out;
  out.reserve(s.entries.size());
  for (const auto& e : s.entries) out.push_back(space.flat_index(e.a, e.b));
  return out;
}

ChirpSchedule schedule_from_flat(const std::vector<int>& flat, const ActionSpace& space) {
  ChirpSchedule s;
  s.entries.reserve(flat.size());
  for (int f : flat) {
    const JointAction& act = space.at(f);
    s.entries.push_back({act.a, act.b, act.f_hz, act.t_s});
  }
  return s;
}

void write_schedule_csv(std::ostream& os, const ChirpSchedule& s) {
  os << "chirp,a,b,f_hz,t_s\n";
  for (int k = 1; k <= s.size(); ++k) {
    const auto& e = s.at(k);
    os << k << ',' << e.a << ',' << e.b << ',';
    os.precision(17);
    os << e.f_hz << ',' << e.t_s << '\n';
  }
}

}  // namespace tfhop
