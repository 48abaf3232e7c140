// Copyright 2026 The pulsersim Authors
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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pulsersim/types.hpp"

namespace psim {

struct LeafSpineParams {
  std::uint32_t n_leaves = 20;
  std::uint32_t hosts_per_leaf = 20;
  std::uint32_t n_spines = 10;
  BitRate line_rate = gigabits_per_second(10);
  SimTime link_delay = microseconds(10);
};

enum class PortRole : std::uint8_t { kHostUplink, kLeafDown, kLeafUp, kSpineDown };

struct PortInfo {
  PortRole role;
  NodeId owner;  // node that transmits on this port
  NodeId peer;   // node at the far end of the link
  std::string name;
};

/// Two-tier leaf-spine fabric. Node ids: hosts first, then leaves, then
/// spines. Every node transmits through output ports; each host has a single
/// uplink. Cross-leaf traffic picks its spine by hashing the flow id, so a
/// flow and its ACKs keep one path for their whole lifetime.
class Topology {
 public:
  /// Throws std::invalid_argument on zero counts, rate or negative delay.
  static Topology build_leaf_spine(const LeafSpineParams& params);

  const LeafSpineParams& params() const { return params_; }

  std::uint32_t host_count() const { return params_.n_leaves * params_.hosts_per_leaf; }
  std::uint32_t node_count() const {
    return host_count() + params_.n_leaves + params_.n_spines;
  }
  std::size_t port_count() const { return ports_.size(); }
  const PortInfo& port(PortId id) const { return ports_[id]; }
  const std::vector<PortInfo>& ports() const { return ports_; }
  std::optional<PortId> find_port(std::string_view name) const;

  bool is_host(NodeId n) const { return n < host_count(); }
  std::uint32_t leaf_of(NodeId host) const { return host / params_.hosts_per_leaf; }
  NodeId leaf_node(std::uint32_t leaf) const { return host_count() + leaf; }
  NodeId spine_node(std::uint32_t spine) const {
    return host_count() + params_.n_leaves + spine;
  }

  PortId host_uplink(NodeId host) const { return host; }
  PortId leaf_down_port(std::uint32_t leaf, std::uint32_t local_host) const;
  PortId leaf_up_port(std::uint32_t leaf, std::uint32_t spine) const;
  PortId spine_down_port(std::uint32_t spine, std::uint32_t leaf) const;
  /// The leaf port that delivers to `host` (its edge port).
  PortId edge_port(NodeId host) const {
    return leaf_down_port(leaf_of(host), host % params_.hosts_per_leaf);
  }

  std::uint32_t spine_for_flow(FlowId flow) const;

  /// Output port used at switch `at` for a packet of `flow` heading to `dst`.
  PortId route(NodeId at, FlowId flow, NodeId dst) const;

  /// Link count on the path between two hosts: 2 on one leaf, 4 otherwise.
  std::uint32_t hop_count(NodeId src, NodeId dst) const;

  /// Propagation-only round trip between two hosts.
  SimTime unloaded_rtt(NodeId src, NodeId dst) const {
    return 2 * static_cast<SimTime>(hop_count(src, dst)) * params_.link_delay;
  }
  SimTime longest_path_rtt() const;

  /// Host-edge capacity of one leaf over its uplink capacity.
  double oversubscription() const {
    return static_cast<double>(params_.hosts_per_leaf) /
           static_cast<double>(params_.n_spines);
  }

 private:
  LeafSpineParams params_;
  std::vector<PortInfo> ports_;
};

}  // namespace psim
