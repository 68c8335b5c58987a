#pragma once

#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "cpnet/io.hpp"
#include "cpnet/model.hpp"

namespace test_helpers {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline cpnet::CPNet load_fixture(const std::string& name) {
  return cpnet::parse_net(read_file(std::string(CPNET_FIXTURE_DIR) + "/" + name));
}

inline cpnet::Outcome outcome_of(const cpnet::CPNet& net, const std::string& text) {
  return cpnet::parse_assignment(text, net, true).as_outcome();
}

inline cpnet::PartialAssignment partial_of(const cpnet::CPNet& net,
                                           const std::string& text) {
  return cpnet::parse_assignment(text, net, false);
}

// Outcome at a mixed-radix index, first variable most significant.
inline cpnet::Outcome outcome_at(const cpnet::CPNet& net, std::uint64_t index) {
  cpnet::Outcome o;
  o.values.assign(net.size(), 0);
  for (size_t v = net.size(); v-- > 0;) {
    std::uint64_t d = net.variables[v].values.size();
    o.values[v] = static_cast<int>(index % d);
    index /= d;
  }
  return o;
}

}  // namespace test_helpers
