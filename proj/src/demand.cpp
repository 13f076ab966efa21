#include "carpool/demand.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "carpool/random.hpp"

namespace carpool {

void validate_log(const RoadNetwork& net, const RequestLog& log) {
  std::unordered_set<int> ids;
  for (const auto& r : log.requests) {
    if (!ids.insert(r.id).second)
      throw std::invalid_argument("duplicate request id " + std::to_string(r.id));
    if (!net.valid(r.pickup) || !net.valid(r.drop))
      throw std::invalid_argument("request " + std::to_string(r.id) +
                                  " references a node outside the network");
    if (r.pickup == r.drop)
      throw std::invalid_argument("request " + std::to_string(r.id) +
                                  " has pickup == drop");
  }
}

RequestLog generate_requests(const RoadNetwork& net, std::size_t count,
                             std::uint64_t seed) {
  const std::uint64_t n = net.node_count();
  if (n < 2) throw std::invalid_argument("request generation needs >= 2 nodes");
  const std::uint64_t pairs = n * (n - 1);
  if (count > pairs) {
    throw std::invalid_argument("requested " + std::to_string(count) +
                                " requests but only " + std::to_string(pairs) +
                                " distinct pairs exist");
  }

  RequestLog log;
  log.seed = seed;
  log.requests.reserve(count);
  Rng rng(seed);
  std::unordered_set<std::uint64_t> used;
  while (log.requests.size() < count) {
    // Pair index p encodes pickup = p / (n-1), drop = the (p % (n-1))-th
    // other node.
    const std::uint64_t p = rng.index(pairs);
    if (!used.insert(p).second) continue;
    const auto pickup = static_cast<NodeId>(p / (n - 1));
    auto drop = static_cast<NodeId>(p % (n - 1));
    if (drop >= pickup) ++drop;
    log.requests.push_back(
        {static_cast<int>(log.requests.size()), pickup, drop});
  }
  return log;
}

RequestLog radius_filter(const RoadNetwork& net, const RequestLog& log,
                         NodeId origin, double t_km) {
  if (!(t_km >= 0.0)) throw std::invalid_argument("radius must be >= 0");
  const Point o = net.coord(origin);
  const double radius_m = t_km * 1000.0;
  RequestLog out;
  out.seed = log.seed;
  for (const auto& r : log.requests) {
    if (straight_line(net.coord(r.pickup), o) <= radius_m) out.requests.push_back(r);
  }
  return out;
}

ServicePlan assign_served(const Route& route, const RequestLog& log,
                          std::optional<int> capacity) {
  ServicePlan plan;
  if (route.nodes.empty()) return plan;
  plan.source = route.source();
  plan.destination = route.destination();

  // onboard[i]: passengers in the car while travelling hop i -> i+1.
  std::vector<int> onboard(route.size(), 0);
  for (const auto& r : log.requests) {
    auto p = std::find(route.nodes.begin(), route.nodes.end(), r.pickup);
    if (p == route.nodes.end()) continue;
    auto d = std::find(p + 1, route.nodes.end(), r.drop);
    if (d == route.nodes.end()) continue;
    const auto pi = static_cast<std::size_t>(p - route.nodes.begin());
    const auto di = static_cast<std::size_t>(d - route.nodes.begin());
    if (capacity) {
      auto peak = *std::max_element(onboard.begin() + static_cast<std::ptrdiff_t>(pi),
                                    onboard.begin() + static_cast<std::ptrdiff_t>(di));
      if (peak + 1 > *capacity) continue;
    }
    for (std::size_t i = pi; i < di; ++i) ++onboard[i];
    plan.served.push_back({r, pi, di});
  }
  return plan;
}

RequestLog parse_requests(std::istream& in) {
  std::string line;
  int line_no = 0;
  bool have_header = false;
  RequestLog log;
  auto fail = [&](const std::string& msg) {
    throw ParseError("line " + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string kind;
    if (!(ls >> kind) || kind.front() == '#') continue;
    if (!have_header) {
      int version = 0;
      if (kind != "carpool-requests" || !(ls >> version >> log.seed) || version != 1)
        fail("expected header 'carpool-requests 1 <seed>'");
      have_header = true;
    } else if (kind == "request") {
      long long id, pickup, drop;
      if (!(ls >> id >> pickup >> drop) || pickup < 0 || drop < 0)
        fail("expected 'request <id> <pickup> <drop>'");
      log.requests.push_back({static_cast<int>(id), static_cast<NodeId>(pickup),
                              static_cast<NodeId>(drop)});
    } else {
      fail("unknown record '" + kind + "'");
    }
    std::string extra;
    if (ls >> extra) fail("trailing text '" + extra + "'");
  }
  if (!have_header) throw ParseError("missing 'carpool-requests' header");
  return log;
}

RequestLog load_requests(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open request file " + path.string());
  return parse_requests(in);
}

void write_requests(std::ostream& out, const RequestLog& log) {
  out << "carpool-requests 1 " << log.seed << '\n';
  for (const auto& r : log.requests)
    out << "request " << r.id << ' ' << r.pickup << ' ' << r.drop << '\n';
}

void save_requests(const std::filesystem::path& path, const RequestLog& log) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write request file " + path.string());
  write_requests(out, log);
}

}  // namespace carpool
