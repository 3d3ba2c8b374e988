#include "tfhop/actions.hpp"

#include <stdexcept>
#include <string>

namespace tfhop {

ActionSpace::ActionSpace(int a_f, double delta_f_hz, int a_t, double delta_t_s, double f_c_hz)
    : a_f_(a_f), a_t_(a_t), delta_f_hz_(delta_f_hz), delta_t_s_(delta_t_s), f_c_hz_(f_c_hz) {
  actions_.reserve(static_cast<std::size_t>(a_f) * a_t);
  for (int a = 1; a <= a_f; ++a) {
    for (int b = 1; b <= a_t; ++b) {
      JointAction act;
      act.a = a;
      act.b = b;
      act.f_hz = f_c_hz + (a - 1) * delta_f_hz;
      act.t_s = (b - 1) * delta_t_s;
      actions_.push_back(act);
    }
  }
}

const JointAction& ActionSpace::at(int flat) const {
  if (flat < 1 || flat > size()) throw std::out_of_range("ActionSpace: flat index " + std::to_string(flat));
  return actions_[static_cast<std::size_t>(flat) - 1];
}

int ActionSpace::flat_index(int a, int b) const {
  if (a < 1 || a > a_f_ || b < 1 || b > a_t_)
    throw std::out_of_range("ActionSpace: pair (" + std::to_string(a) + "," + std::to_string(b) + ")");
  return (a - 1) * a_t_ + b;
}

ActionSpace build_action_space(int a_f, double delta_f_hz, int a_t, double delta_t_s,
                               double f_c_hz,
                               std::optional<double> t_a_s,
                               std::optional<double> t_pri_s) {
  if (a_f < 1 || a_t < 1) throw std::invalid_argument("build_action_space: A_f and A_t must be >= 1");
  if (delta_f_hz <= 0.0 || delta_t_s <= 0.0)
    throw std::invalid_argument("build_action_space: grid steps must be positive");
  if (t_a_s && t_pri_s) {
    double last_slot = (a_t - 1) * delta_t_s;
    if (last_slot + *t_a_s > *t_pri_s)
      throw std::invalid_argument("build_action_space: last slot + T_a exceeds T_pri");
  }
  return ActionSpace(a_f, delta_f_hz, a_t, delta_t_s, f_c_hz);
}

int nash_assignment_flat(int radar_index, int action_count) {
  if (radar_index < 1) throw std::invalid_argument("nash_assignment: radar index must be >= 1");
  if (action_count < 1) throw std::invalid_argument("nash_assignment: empty action space");
  return (radar_index - 1) % action_count + 1;
}

const JointAction& nash_assignment(int radar_index, const ActionSpace& space) {
  return space.at(nash_assignment_flat(radar_index, space.size()));
}

}  // namespace tfhop
