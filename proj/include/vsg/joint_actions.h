// Copyright 2026 The VSG Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VSG_JOINT_ACTIONS_H_
#define VSG_JOINT_ACTIONS_H_

#include <vector>

namespace vsg {

// Flattened index space over joint actions. The flattening is row-major with
// agent 0 outermost: joint = a0 * |A1|*...*|A_{N-1}| + a1 * ... + a_{N-1}.
// Opponent indices for agent i use the same row-major order over the agents
// j != i in increasing j.
class JointActionSpace {
 public:
  JointActionSpace() = default;
  explicit JointActionSpace(std::vector<int> sizes);

  int n_agents() const { return static_cast<int>(sizes_.size()); }
  int size() const { return total_; }
  int agent_size(int i) const { return sizes_[i]; }
  int opponent_size(int i) const { return total_ / sizes_[i]; }
  const std::vector<int>& sizes() const { return sizes_; }

  int own_action(int i, int joint) const {
    return (joint / strides_[i]) % sizes_[i];
  }
  int opponent_index(int i, int joint) const;
  int compose(int i, int own, int opp) const;

  std::vector<int> decode(int joint) const;
  int encode(const std::vector<int>& actions) const;

  // Actions of the agents j != i (in increasing j) encoded by `opp`.
  std::vector<int> decode_opponent(int i, int opp) const;

  // table[opp * |A_i| + own] = joint index. Built on demand for hot loops.
  std::vector<int> compose_table(int i) const;

 private:
  std::vector<int> sizes_;
  std::vector<int> strides_;
  int total_ = 1;
};

}  // namespace vsg

#endif  // VSG_JOINT_ACTIONS_H_
