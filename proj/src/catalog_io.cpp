#include "aidroute/catalog_io.hpp"

#include <algorithm>

#include "aidroute/errors.hpp"
#include "aidroute/grid_io.hpp"

namespace aidroute {

namespace {

// Yields (line number, fields) for each data row after checking the header.
template <typename Fn>
void for_each_row(std::string_view csv, std::string_view expected_header, Fn&& fn) {
  const auto want = split_on(expected_header, ',');
  bool header_seen = false;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < csv.size()) {
    std::size_t end = csv.find('\n', pos);
    if (end == std::string_view::npos) end = csv.size();
    const std::string_view line = trim(csv.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split_on(line, ',');
    if (!header_seen) {
      if (fields != want)
        throw ParseError("expected header '" + std::string(expected_header) + "'", line_no);
      header_seen = true;
      continue;
    }
    if (fields.size() != want.size())
      throw ParseError("expected " + std::to_string(want.size()) + " fields, got " +
                       std::to_string(fields.size()),
                       line_no);
    fn(line_no, fields);
  }
  if (!header_seen) throw ParseError("missing header '" + std::string(expected_header) + "'");
}

bool parse_bool(std::string_view s, int line) {
  if (s == "1" || s == "true" || s == "yes" || s == "Y" || s == "y") return true;
  if (s == "0" || s == "false" || s == "no" || s == "N" || s == "n" || s.empty()) return false;
  throw ParseError("expected a boolean, got '" + std::string(s) + "'", line);
}

std::string num(double v) { return format_double(v); }

}  // namespace

std::vector<DroneSpec> parse_drone_catalog(std::string_view csv) {
  std::vector<DroneSpec> out;
  for_each_row(csv, "model,mpc_lb,speed_kmh,flight_time_min,bay_l,bay_w,bay_h,video",
               [&](int line, const std::vector<std::string_view>& f) {
                 DroneSpec d;
                 d.model = std::string(f[0]);
                 if (d.model.empty()) throw ParseError("empty drone model", line);
                 d.mpc_lb = parse_double(f[1], line);
                 d.speed_kmh = parse_double(f[2], line);
                 d.flight_time_min = parse_double(f[3], line);
                 const bool any_bay = !f[4].empty() || !f[5].empty() || !f[6].empty();
                 if (any_bay) {
                   d.bay = Dims{parse_double(f[4], line), parse_double(f[5], line),
                                parse_double(f[6], line)};
                   if (!(d.bay->l > 0 && d.bay->w > 0 && d.bay->h > 0))
                     throw ParseError("bay dims must be positive", line);
                 }
                 d.video = parse_bool(f[7], line);
                 if (d.mpc_lb < 0 || d.speed_kmh < 0 || d.flight_time_min < 0)
                   throw ParseError("drone figures must be non-negative", line);
                 out.push_back(std::move(d));
               });
  return out;
}

std::string serialize_drone_catalog(const std::vector<DroneSpec>& catalog) {
  std::string out = "model,mpc_lb,speed_kmh,flight_time_min,bay_l,bay_w,bay_h,video\n";
  for (const auto& d : catalog) {
    out += d.model + "," + num(d.mpc_lb) + "," + num(d.speed_kmh) + "," + num(d.flight_time_min);
    if (d.bay)
      out += "," + num(d.bay->l) + "," + num(d.bay->w) + "," + num(d.bay->h);
    else
      out += ",,,";
    out += d.video ? ",yes\n" : ",no\n";
  }
  return out;
}

PackageCatalog parse_package_catalog(std::string_view csv) {
  PackageCatalog cat;
  cat.crates.clear();
  std::array<bool, 3> seen{};
  for_each_row(csv, "kind,l,w,h,weight_lb", [&](int line, const std::vector<std::string_view>& f) {
    const std::string kind(f[0]);
    const Dims d{parse_double(f[1], line), parse_double(f[2], line), parse_double(f[3], line)};
    if (!(d.l > 0 && d.w > 0 && d.h > 0)) throw ParseError("box dims must be positive", line);
    const double weight = parse_double(f[4], line);
    if (weight < 0) throw ParseError("weight must be non-negative", line);
    for (int i = 0; i < 3; ++i)
      if (kind == "MED" + std::to_string(i + 1)) {
        cat.meds[i] = Box{kind, d, weight};
        seen[i] = true;
        return;
      }
    cat.crates[kind] = d;
  });
  for (int i = 0; i < 3; ++i)
    if (!seen[i]) throw ParseError("package catalog lacks MED" + std::to_string(i + 1));
  return cat;
}

std::string serialize_package_catalog(const PackageCatalog& catalog) {
  std::string out = "kind,l,w,h,weight_lb\n";
  for (const auto& b : catalog.meds)
    out += b.kind + "," + num(b.dims.l) + "," + num(b.dims.w) + "," + num(b.dims.h) + "," +
           num(b.weight_lb) + "\n";
  for (const auto& [model, d] : catalog.crates)
    out += model + "," + num(d.l) + "," + num(d.w) + "," + num(d.h) + ",0\n";
  return out;
}

std::vector<Destination> parse_destinations(std::string_view csv) {
  std::vector<Destination> out;
  for_each_row(csv, "name,lat,lon,med1_per_day,med2_per_day,med3_per_day",
               [&](int line, const std::vector<std::string_view>& f) {
                 Destination d;
                 d.name = std::string(f[0]);
                 d.pos = {parse_double(f[1], line), parse_double(f[2], line)};
                 for (int i = 0; i < 3; ++i) {
                   const long long v = parse_int(f[3 + i], line);
                   if (v < 0) throw ParseError("daily demand must be non-negative", line);
                   d.daily[i] = static_cast<int>(v);
                 }
                 if (std::any_of(out.begin(), out.end(),
                                 [&](const Destination& o) { return o.name == d.name; }))
                   throw ParseError("duplicate destination '" + d.name + "'", line);
                 out.push_back(std::move(d));
               });
  return out;
}

}  // namespace aidroute
