#include "penplot/service.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>

#include "penplot/demos.hpp"

namespace penplot {

using nlohmann::json;

PanelSpec default_panel_spec() {
  PanelSpec spec;
  const View view = default_view();
  spec.euler = view.euler;
  spec.projection = view.projection;
  return spec;
}

namespace {

constexpr std::string_view kContourSuffix = "-contour";

struct DemoRef {
  std::string base;
  bool contour = false;
};

std::optional<DemoRef> parse_demo(std::string_view name) {
  DemoRef ref{std::string(name), false};
  if (name.size() > kContourSuffix.size() && name.ends_with(kContourSuffix)) {
    ref.base = std::string(name.substr(0, name.size() - kContourSuffix.size()));
    ref.contour = true;
  }
  auto info = find_demo(ref.base);
  if (!info) return std::nullopt;
  if (ref.contour && info->kind != DemoKind::scalar) return std::nullopt;
  return ref;
}

}  // namespace

std::vector<std::string> invalid_fields(const PanelSpec& spec) {
  std::vector<std::string> fields;
  if (!parse_demo(spec.demo)) fields.push_back("demo");
  if (!std::isfinite(spec.euler.phi) || !std::isfinite(spec.euler.theta) ||
      !std::isfinite(spec.euler.psi)) {
    fields.push_back("euler");
  }
  if (spec.resolution < 2 || spec.resolution > 512) fields.push_back("resolution");
  if (spec.projection.kind == Projection::Kind::perspective &&
      !(std::isfinite(spec.projection.distance) && spec.projection.distance > 0.0)) {
    fields.push_back("projection");
  }
  if (spec.levels < 1 || spec.levels > 64) fields.push_back("levels");
  return fields;
}

json to_json(const PanelSpec& spec) {
  json projection = {{"mode", spec.projection.kind == Projection::Kind::orthographic
                                  ? "orthographic"
                                  : "perspective"}};
  if (spec.projection.kind == Projection::Kind::perspective) {
    projection["distance"] = spec.projection.distance;
  }
  return {
      {"demo", spec.demo},
      {"euler", {{"phi", spec.euler.phi}, {"theta", spec.euler.theta}, {"psi", spec.euler.psi}}},
      {"resolution", spec.resolution},
      {"projection", projection},
      {"style", spec.style == MeshStyle::mesh ? "mesh" : "rows"},
      {"levels", spec.levels},
  };
}

PanelSpec panel_spec_from_json(const json& body) {
  if (!body.is_object()) throw ValidationError({"body"}, "panel spec must be a JSON object");
  PanelSpec spec = default_panel_spec();
  std::vector<std::string> bad;
  for (const auto& [key, value] : body.items()) {
    if (key == "demo") {
      if (value.is_string()) {
        spec.demo = value.get<std::string>();
      } else {
        bad.push_back(key);
      }
    } else if (key == "euler") {
      bool ok = value.is_object();
      if (ok) {
        for (const auto& [angle, v] : value.items()) {
          if (!v.is_number()) {
            ok = false;
          } else if (angle == "phi") {
            spec.euler.phi = v.get<double>();
          } else if (angle == "theta") {
            spec.euler.theta = v.get<double>();
          } else if (angle == "psi") {
            spec.euler.psi = v.get<double>();
          } else {
            ok = false;
          }
        }
      }
      if (!ok) bad.push_back(key);
    } else if (key == "resolution") {
      if (value.is_number_integer()) {
        spec.resolution = value.get<int>();
      } else {
        bad.push_back(key);
      }
    } else if (key == "projection") {
      const std::string mode =
          value.is_object() && value.contains("mode") && value["mode"].is_string()
              ? value["mode"].get<std::string>()
              : "";
      if (mode == "orthographic" && value.size() == 1) {
        spec.projection = Projection::orthographic();
      } else if (mode == "perspective" && value.size() == 2 && value.contains("distance") &&
                 value["distance"].is_number()) {
        spec.projection = {Projection::Kind::perspective, value["distance"].get<double>()};
      } else {
        bad.push_back(key);
      }
    } else if (key == "style") {
      const std::string style = value.is_string() ? value.get<std::string>() : "";
      if (style == "mesh") {
        spec.style = MeshStyle::mesh;
      } else if (style == "rows") {
        spec.style = MeshStyle::rows;
      } else {
        bad.push_back(key);
      }
    } else if (key == "levels") {
      if (value.is_number_integer()) {
        spec.levels = value.get<int>();
      } else {
        bad.push_back(key);
      }
    } else {
      bad.push_back(key);
    }
  }
  for (auto& f : invalid_fields(spec)) {
    if (std::find(bad.begin(), bad.end(), f) == bad.end()) bad.push_back(f);
  }
  if (!bad.empty()) {
    std::string message = "invalid panel spec fields:";
    for (const auto& f : bad) message += " " + f;
    throw ValidationError(bad, message);
  }
  return spec;
}

DisplayList render_panel(const PanelSpec& spec) {
  if (auto bad = invalid_fields(spec); !bad.empty()) {
    throw ValidationError(bad, "invalid panel spec");
  }
  const DemoRef ref = *parse_demo(spec.demo);
  const Resolution res{spec.resolution};
  try {
    if (ref.contour) {
      const ScalarGrid grid = sample_demo(ref.base, res);
      return render_contour_plot(grid, choose_levels(grid, spec.levels));
    }
    SurfaceOptions options;
    options.euler = spec.euler;
    options.projection = spec.projection;
    options.style = spec.style;
    if (find_demo(ref.base)->kind == DemoKind::scalar) {
      return render_scalar_surface(sample_demo(ref.base, res), options);
    }
    return render_closed_surface(closed_demo(ref.base, res), options);
  } catch (const Error& e) {
    if (e.code() == Errc::behind_eye) {
      throw ValidationError({"projection"}, "perspective eye lies inside the surface");
    }
    throw;
  }
}

namespace {

void append_fixed3(std::string& out, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  out += std::string_view(buf) == "-0.000" ? "0.000" : buf;
}

void append_display_list(std::string& out, const DisplayList& list) {
  out += "\"commands\":[";
  bool first = true;
  auto open = [&](const char* op) {
    if (!first) out += ',';
    first = false;
    out += "[\"";
    out += op;
    out += '"';
  };
  auto point = [&](const char* op, Point2 p) {
    open(op);
    out += ',';
    append_fixed3(out, p.x);
    out += ',';
    append_fixed3(out, p.y);
    out += ']';
  };
  bool any_point = false;
  for (const auto& cmd : list.commands) {
    if (const auto* m = std::get_if<MoveTo>(&cmd)) {
      point("M", m->p);
      any_point = true;
    } else if (const auto* l = std::get_if<LineTo>(&cmd)) {
      point("L", l->p);
      any_point = true;
    } else if (const auto* k = std::get_if<Marker>(&cmd)) {
      point("K", k->p);
      any_point = true;
    } else if (const auto* sp = std::get_if<SelectPen>(&cmd)) {
      open("P");
      out += ',' + std::to_string(sp->id) + ']';
    }
  }
  out += "],\"bbox\":[";
  if (!any_point) {
    out += "0,0,0,0";
  } else {
    append_fixed3(out, list.bbox.min.x);
    out += ',';
    append_fixed3(out, list.bbox.min.y);
    out += ',';
    append_fixed3(out, list.bbox.max.x);
    out += ',';
    append_fixed3(out, list.bbox.max.y);
  }
  out += "]";
}

}  // namespace

std::string serialize_display_list(const DisplayList& list) {
  std::string out = "{";
  append_display_list(out, list);
  out += "}";
  return out;
}

std::string serialize_display_list(const DisplayList& list, std::uint64_t revision) {
  std::string out = "{\"revision\":" + std::to_string(revision) + ",";
  append_display_list(out, list);
  out += "}";
  return out;
}

// --- session store -----------------------------------------------------------

struct SessionStore::Session {
  std::mutex write;
  std::shared_ptr<const SessionSnapshot> snapshot;  // std::atomic_load/store only
  std::atomic<std::chrono::steady_clock::rep> last_access{0};

  std::shared_ptr<const SessionSnapshot> load() const { return std::atomic_load(&snapshot); }
  void publish(std::shared_ptr<const SessionSnapshot> next) {
    std::atomic_store(&snapshot, std::move(next));
  }
};

SessionStore::SessionStore() : SessionStore(Limits{}) {}

SessionStore::SessionStore(Limits limits, Clock clock)
    : limits_(limits), clock_(std::move(clock)), rng_(std::random_device{}()) {}

std::string SessionStore::new_id() {
  char buf[33];
  std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(rng_()),
                static_cast<unsigned long long>(rng_()));
  return buf;
}

std::string SessionStore::create_session() {
  evict_idle();
  const PanelSpec spec = default_panel_spec();
  auto list = std::make_shared<const DisplayList>(render_panel(spec));

  std::unique_lock lock(mutex_);
  if (sessions_.size() >= limits_.max_sessions) {
    throw Error(Errc::capacity, "session limit of " + std::to_string(limits_.max_sessions) +
                                    " reached");
  }
  std::string id;
  do {
    id = new_id();
  } while (sessions_.count(id) != 0);

  auto snapshot = std::make_shared<SessionSnapshot>();
  snapshot->id = id;
  snapshot->revision = 1;
  snapshot->panels.push_back({spec, std::move(list), 1});
  auto session = std::make_shared<Session>();
  session->publish(std::move(snapshot));
  session->last_access = clock_().time_since_epoch().count();
  sessions_.emplace(id, std::move(session));
  return id;
}

std::shared_ptr<SessionStore::Session> SessionStore::find(const std::string& id) {
  const auto now = clock_().time_since_epoch().count();
  {
    std::shared_lock lock(mutex_);
    auto it = sessions_.find(id);
    if (it != sessions_.end() && now - it->second->last_access.load() <= limits_.idle_timeout.count()) {
      it->second->last_access = now;
      return it->second;
    }
    if (it == sessions_.end()) throw Error(Errc::not_found, "no session " + id);
  }
  std::unique_lock lock(mutex_);
  sessions_.erase(id);
  throw Error(Errc::not_found, "session " + id + " expired");
}

std::shared_ptr<const SessionSnapshot> SessionStore::session(const std::string& id) {
  return find(id)->load();
}

namespace {

void check_index(const SessionSnapshot& snap, std::size_t index) {
  if (index >= snap.panels.size()) {
    throw Error(Errc::not_found, "no panel " + std::to_string(index));
  }
}

}  // namespace

std::uint64_t SessionStore::update_panel(const std::string& id, std::size_t index,
                                         const PanelSpec& spec) {
  auto session = find(id);
  std::lock_guard lock(session->write);
  auto current = session->load();
  check_index(*current, index);
  auto list = std::make_shared<const DisplayList>(render_panel(spec));
  auto next = std::make_shared<SessionSnapshot>(*current);
  ++next->revision;
  next->panels[index] = {spec, std::move(list), next->revision};
  const auto revision = next->revision;
  session->publish(std::move(next));
  return revision;
}

std::pair<std::size_t, std::uint64_t> SessionStore::add_panel(const std::string& id,
                                                              const PanelSpec& spec) {
  auto session = find(id);
  std::lock_guard lock(session->write);
  auto current = session->load();
  if (current->panels.size() >= limits_.max_panels) {
    throw Error(Errc::capacity, "panel limit of " + std::to_string(limits_.max_panels) +
                                    " reached");
  }
  auto list = std::make_shared<const DisplayList>(render_panel(spec));
  auto next = std::make_shared<SessionSnapshot>(*current);
  ++next->revision;
  next->panels.push_back({spec, std::move(list), next->revision});
  const auto result = std::make_pair(next->panels.size() - 1, next->revision);
  session->publish(std::move(next));
  return result;
}

std::uint64_t SessionStore::remove_panel(const std::string& id, std::size_t index) {
  auto session = find(id);
  std::lock_guard lock(session->write);
  auto current = session->load();
  check_index(*current, index);
  if (current->panels.size() <= 1) {
    throw Error(Errc::capacity, "a session keeps at least one panel");
  }
  auto next = std::make_shared<SessionSnapshot>(*current);
  ++next->revision;
  next->panels.erase(next->panels.begin() + static_cast<std::ptrdiff_t>(index));
  const auto revision = next->revision;
  session->publish(std::move(next));
  return revision;
}

PanelState SessionStore::panel(const std::string& id, std::size_t index) {
  auto snap = find(id)->load();
  check_index(*snap, index);
  return snap->panels[index];
}

std::string SessionStore::export_panel(const std::string& id, std::size_t index,
                                       ExportFormat format) {
  const PanelState state = panel(id, index);
  if (format == ExportFormat::hpgl) return emit_hpgl(*state.list).text();
  return emit_svg(*state.list);
}

std::size_t SessionStore::evict_idle() {
  const auto now = clock_().time_since_epoch().count();
  std::unique_lock lock(mutex_);
  std::size_t evicted = 0;
  for (auto it = sessions_.begin(); it != sessions_.end();) {
    if (now - it->second->last_access.load() > limits_.idle_timeout.count()) {
      it = sessions_.erase(it);
      ++evicted;
    } else {
      ++it;
    }
  }
  return evicted;
}

std::size_t SessionStore::session_count() const {
  std::shared_lock lock(mutex_);
  return sessions_.size();
}

}  // namespace penplot
