// Copyright 2026 The risd2d Authors
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

#pragma once

#include "risd2d/channel.hpp"
#include "risd2d/radio.hpp"
#include "risd2d/topology.hpp"

namespace risd2d {

/// Everything needed to evaluate a link budget: layout, fading model, radio.
struct Scenario {
  Topology topology = Topology::reference_layout();
  ChannelParams channel;
  RadioConfig radio;

  void validate() const {
    topology.validate();
    channel.validate();
    radio.validate(topology.num_pairs(), topology.num_users());
  }
};

}  // namespace risd2d
