#pragma once

#include <optional>
#include <vector>

namespace tfhop {

// One joint (subband, time-slot) choice. Indices are 1-based; the physical
// values satisfy f_a = f_c + (a-1)*df and t_b = (b-1)*dt.
struct JointAction {
  int a = 1;
  int b = 1;
  double f_hz = 0.0;
  double t_s = 0.0;
};

// Cartesian grid of joint actions, row-major by (a, b). Immutable after
// construction; the flat index is 1-based to match the assignment formula
// mod(i-1, A_f*A_t) + 1.
class ActionSpace {
 public:
  ActionSpace() = default;
  ActionSpace(int a_f, double delta_f_hz, int a_t, double delta_t_s, double f_c_hz);

  int size() const { return static_cast<int>(actions_.size()); }
  int subband_count() const { return a_f_; }
  int slot_count() const { return a_t_; }
  double delta_f_hz() const { return delta_f_hz_; }
  double delta_t_s() const { return delta_t_s_; }
  double carrier_hz() const { return f_c_hz_; }

  const JointAction& at(int flat) const;          // flat in 1..A_f*A_t
  int flat_index(int a, int b) const;             // 1-based pair -> 1-based flat
  const std::vector<JointAction>& actions() const { return actions_; }

 private:
  int a_f_ = 0;
  int a_t_ = 0;
  double delta_f_hz_ = 0.0;
  double delta_t_s_ = 0.0;
  double f_c_hz_ = 0.0;
  std::vector<JointAction> actions_;
};

// Builds the grid; rejects empty grids and, when the active/PRI durations are
// supplied, grids whose last slot does not fit the dwell (t_At + T_a > T_pri).
ActionSpace build_action_space(int a_f, double delta_f_hz, int a_t, double delta_t_s,
                               double f_c_hz,
                               std::optional<double> t_a_s = std::nullopt,
                               std::optional<double> t_pri_s = std::nullopt);

// Deterministic baseline assignment: radar i gets flat index mod(i-1, n)+1.
const JointAction& nash_assignment(int radar_index, const ActionSpace& space);
int nash_assignment_flat(int radar_index, int action_count);

}  // namespace tfhop
