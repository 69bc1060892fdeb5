#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "silo/error.hpp"
#include "silo/game.hpp"

namespace silo {

// Mixed-radix codec between joint profiles and state indices. Organization 0
// is the most significant digit: index = sum_i y_i * (r+1)^(N-1-i), so the
// states where organization 0 plays 0 occupy the leading contiguous block of
// (r+1)^(N-1) indices.
class StateSpace {
 public:
  StateSpace(int n_orgs, int max_rounds)
      : n_orgs_(n_orgs), num_actions_(max_rounds + 1) {
    if (n_orgs < 2) fail(ErrorKind::InvalidArgument, "StateSpace: n_orgs must be >= 2");
    if (max_rounds < 1) fail(ErrorKind::InvalidArgument, "StateSpace: max_rounds must be >= 1");
    pow_.resize(static_cast<size_t>(n_orgs_) + 1);
    pow_[0] = 1;
    countable_ = true;
    const std::uint64_t a = static_cast<std::uint64_t>(num_actions_);
    for (int i = 1; i <= n_orgs_; ++i) {
      if (countable_ && pow_[static_cast<size_t>(i) - 1] >
                            std::numeric_limits<std::uint64_t>::max() / a) {
        countable_ = false;
      }
      pow_[static_cast<size_t>(i)] =
          countable_ ? pow_[static_cast<size_t>(i) - 1] * a : 0;
    }
  }

  explicit StateSpace(const GameConfig& cfg)
      : StateSpace(cfg.n_orgs, cfg.max_rounds) {}

  int n_orgs() const { return n_orgs_; }
  int num_actions() const { return num_actions_; }  // r + 1
  bool countable() const { return countable_; }

  std::uint64_t num_states() const {
    if (!countable_)
      fail(ErrorKind::TooLarge, "state space size overflows 64 bits");
    return pow_[static_cast<size_t>(n_orgs_)];
  }

  bool enumerable(std::uint64_t cap) const {
    return countable_ && num_states() <= cap;
  }

  std::uint64_t place(int org) const {  // weight of organization org's digit
    return pow_[static_cast<size_t>(n_orgs_ - 1 - org)];
  }

  std::uint64_t encode(const JointProfile& profile) const {
    if (!countable_) fail(ErrorKind::TooLarge, "state space not countable");
    if (profile.size() != n_orgs_)
      fail(ErrorKind::InvalidArgument, "profile length does not match n_orgs");
    std::uint64_t idx = 0;
    for (int i = 0; i < n_orgs_; ++i) {
      int y = profile[i];
      if (y < 0 || y >= num_actions_)
        fail(ErrorKind::InvalidArgument, "profile action out of range");
      idx += static_cast<std::uint64_t>(y) * place(i);
    }
    return idx;
  }

  void decode_into(std::uint64_t index, JointProfile& out) const {
    out.actions.resize(static_cast<size_t>(n_orgs_));
    for (int i = 0; i < n_orgs_; ++i) {
      out[i] = static_cast<int>((index / place(i)) %
                                static_cast<std::uint64_t>(num_actions_));
    }
  }

  JointProfile decode(std::uint64_t index) const {
    if (!countable_ || index >= num_states())
      fail(ErrorKind::InvalidArgument, "state index out of range");
    JointProfile p;
    decode_into(index, p);
    return p;
  }

  int action_of(std::uint64_t index, int org) const {
    return static_cast<int>((index / place(org)) %
                            static_cast<std::uint64_t>(num_actions_));
  }

 private:
  int n_orgs_;
  int num_actions_;
  bool countable_ = true;
  std::vector<std::uint64_t> pow_;
};

}  // namespace silo
