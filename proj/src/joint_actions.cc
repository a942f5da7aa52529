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

#include "vsg/joint_actions.h"

#include "vsg/check.h"

namespace vsg {

JointActionSpace::JointActionSpace(std::vector<int> sizes)
    : sizes_(std::move(sizes)) {
  VSG_CHECK(!sizes_.empty(), "JointActionSpace: no agents");
  strides_.resize(sizes_.size());
  int stride = 1;
  for (int i = static_cast<int>(sizes_.size()) - 1; i >= 0; --i) {
    VSG_CHECK(sizes_[i] >= 1, "JointActionSpace: empty action set");
    strides_[i] = stride;
    stride *= sizes_[i];
  }
  total_ = stride;
}

int JointActionSpace::opponent_index(int i, int joint) const {
  int opp = 0;
  for (int j = 0; j < n_agents(); ++j) {
    if (j == i) continue;
    opp = opp * sizes_[j] + (joint / strides_[j]) % sizes_[j];
  }
  return opp;
}

int JointActionSpace::compose(int i, int own, int opp) const {
  // Peel opponent digits from the innermost agent outwards.
  int joint = own * strides_[i];
  for (int j = n_agents() - 1; j >= 0; --j) {
    if (j == i) continue;
    joint += (opp % sizes_[j]) * strides_[j];
    opp /= sizes_[j];
  }
  return joint;
}

std::vector<int> JointActionSpace::decode(int joint) const {
  std::vector<int> a(n_agents());
  for (int j = 0; j < n_agents(); ++j) a[j] = (joint / strides_[j]) % sizes_[j];
  return a;
}

int JointActionSpace::encode(const std::vector<int>& actions) const {
  VSG_CHECK(static_cast<int>(actions.size()) == n_agents(),
            "encode: wrong arity");
  int joint = 0;
  for (int j = 0; j < n_agents(); ++j) {
    VSG_CHECK(actions[j] >= 0 && actions[j] < sizes_[j],
              "encode: action out of range");
    joint += actions[j] * strides_[j];
  }
  return joint;
}

std::vector<int> JointActionSpace::decode_opponent(int i, int opp) const {
  std::vector<int> a;
  a.reserve(n_agents() - 1);
  // Recover digits in increasing-j order from the row-major opponent index.
  std::vector<int> rev;
  for (int j = n_agents() - 1; j >= 0; --j) {
    if (j == i) continue;
    rev.push_back(opp % sizes_[j]);
    opp /= sizes_[j];
  }
  for (auto it = rev.rbegin(); it != rev.rend(); ++it) a.push_back(*it);
  return a;
}

std::vector<int> JointActionSpace::compose_table(int i) const {
  std::vector<int> table(static_cast<size_t>(opponent_size(i)) * sizes_[i]);
  for (int opp = 0; opp < opponent_size(i); ++opp) {
    for (int own = 0; own < sizes_[i]; ++own) {
      table[static_cast<size_t>(opp) * sizes_[i] + own] = compose(i, own, opp);
    }
  }
  return table;
}

}  // namespace vsg
