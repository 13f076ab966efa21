#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "carpool/roadnet.hpp"
#include "carpool/route.hpp"

namespace carpool {

struct Request {
  int id = 0;
  NodeId pickup = 0;
  NodeId drop = 0;

  friend bool operator==(const Request&, const Request&) = default;
};

struct RequestLog {
  std::vector<Request> requests;
  std::uint64_t seed = 0;

  bool empty() const { return requests.empty(); }
  std::size_t size() const { return requests.size(); }
  friend bool operator==(const RequestLog&, const RequestLog&) = default;
};

/// Throws std::invalid_argument on duplicate ids, pickup == drop, or ids not
/// in the network.
void validate_log(const RoadNetwork& net, const RequestLog& log);

/// count distinct (pickup, drop) pairs drawn uniformly without replacement.
/// Request ids are 0..count-1.
RequestLog generate_requests(const RoadNetwork& net, std::size_t count,
                             std::uint64_t seed);

/// Requests whose pickup lies within t_km (straight line) of origin, in
/// their original order. Pass infinity to keep everything.
RequestLog radius_filter(const RoadNetwork& net, const RequestLog& log,
                         NodeId origin, double t_km);

struct ServedRequest {
  Request request;
  std::size_t pickup_index = 0;  // position along the route
  std::size_t drop_index = 0;
};

struct ServicePlan {
  NodeId source = 0;
  NodeId destination = 0;
  std::vector<ServedRequest> served;

  std::size_t occupancy() const { return served.size(); }
};

/// Greedy assignment in log order. A request is served at its earliest
/// pickup occurrence and the earliest drop occurrence after it. With a
/// capacity, a request that would push the onboard count above it at any
/// position is skipped.
ServicePlan assign_served(const Route& route, const RequestLog& log,
                          std::optional<int> capacity = std::nullopt);

// Request files:
//
//   carpool-requests 1 <seed>
//   request <id> <pickup> <drop>
RequestLog parse_requests(std::istream& in);
RequestLog load_requests(const std::filesystem::path& path);
void write_requests(std::ostream& out, const RequestLog& log);
void save_requests(const std::filesystem::path& path, const RequestLog& log);

}  // namespace carpool
