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

#include "pulsersim/topology.hpp"

#include <stdexcept>

namespace psim {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Topology Topology::build_leaf_spine(const LeafSpineParams& params) {
  if (params.n_leaves == 0 || params.hosts_per_leaf == 0 || params.n_spines == 0) {
    throw std::invalid_argument("leaf-spine counts must all be at least 1");
  }
  if (params.line_rate <= 0) throw std::invalid_argument("line rate must be positive");
  if (params.link_delay < 0) throw std::invalid_argument("link delay must be non-negative");

  Topology t;
  t.params_ = params;
  const std::uint32_t hosts = t.host_count();
  t.ports_.reserve(hosts + params.n_leaves * (params.hosts_per_leaf + params.n_spines) +
                   params.n_spines * params.n_leaves);

  for (NodeId h = 0; h < hosts; ++h) {
    t.ports_.push_back({PortRole::kHostUplink, h, t.leaf_node(t.leaf_of(h)),
                        "h" + std::to_string(h) + ".up"});
  }
  for (std::uint32_t l = 0; l < params.n_leaves; ++l) {
    const std::string prefix = "leaf" + std::to_string(l);
    for (std::uint32_t j = 0; j < params.hosts_per_leaf; ++j) {
      t.ports_.push_back({PortRole::kLeafDown, t.leaf_node(l), l * params.hosts_per_leaf + j,
                          prefix + ".down" + std::to_string(j)});
    }
    for (std::uint32_t s = 0; s < params.n_spines; ++s) {
      t.ports_.push_back({PortRole::kLeafUp, t.leaf_node(l), t.spine_node(s),
                          prefix + ".up" + std::to_string(s)});
    }
  }
  for (std::uint32_t s = 0; s < params.n_spines; ++s) {
    for (std::uint32_t l = 0; l < params.n_leaves; ++l) {
      t.ports_.push_back({PortRole::kSpineDown, t.spine_node(s), t.leaf_node(l),
                          "spine" + std::to_string(s) + ".down" + std::to_string(l)});
    }
  }
  return t;
}

std::optional<PortId> Topology::find_port(std::string_view name) const {
  for (PortId i = 0; i < ports_.size(); ++i) {
    if (ports_[i].name == name) return i;
  }
  return std::nullopt;
}

PortId Topology::leaf_down_port(std::uint32_t leaf, std::uint32_t local_host) const {
  return host_count() + leaf * (params_.hosts_per_leaf + params_.n_spines) + local_host;
}

PortId Topology::leaf_up_port(std::uint32_t leaf, std::uint32_t spine) const {
  return host_count() + leaf * (params_.hosts_per_leaf + params_.n_spines) +
         params_.hosts_per_leaf + spine;
}

PortId Topology::spine_down_port(std::uint32_t spine, std::uint32_t leaf) const {
  return host_count() + params_.n_leaves * (params_.hosts_per_leaf + params_.n_spines) +
         spine * params_.n_leaves + leaf;
}

std::uint32_t Topology::spine_for_flow(FlowId flow) const {
  return static_cast<std::uint32_t>(splitmix64(flow) % params_.n_spines);
}

PortId Topology::route(NodeId at, FlowId flow, NodeId dst) const {
  const std::uint32_t dst_leaf = leaf_of(dst);
  if (at >= spine_node(0)) {
    return spine_down_port(at - spine_node(0), dst_leaf);
  }
  const std::uint32_t leaf = at - leaf_node(0);
  if (leaf == dst_leaf) return leaf_down_port(leaf, dst % params_.hosts_per_leaf);
  return leaf_up_port(leaf, spine_for_flow(flow));
}

std::uint32_t Topology::hop_count(NodeId src, NodeId dst) const {
  return leaf_of(src) == leaf_of(dst) ? 2 : 4;
}

SimTime Topology::longest_path_rtt() const {
  const std::uint32_t hops = params_.n_leaves > 1 ? 4 : 2;
  return 2 * static_cast<SimTime>(hops) * params_.link_delay;
}

}  // namespace psim
