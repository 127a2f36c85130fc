#pragma once

// Session service: named sessions of independently parameterized panels.
// Each mutation re-renders synchronously and publishes an immutable session
// snapshot; readers load the latest snapshot without taking the writer lock.

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <shared_mutex>
#include <string>
#include <vector>

#include "json.hpp"
#include "penplot/backends.hpp"
#include "penplot/error.hpp"
#include "penplot/surface3d.hpp"

namespace penplot {

class ValidationError : public Error {
 public:
  ValidationError(std::vector<std::string> fields, const std::string& message)
      : Error(Errc::validation, message), fields_(std::move(fields)) {}
  const std::vector<std::string>& fields() const { return fields_; }

 private:
  std::vector<std::string> fields_;
};

struct PanelSpec {
  std::string demo = "sinc";  // a demo name, or "<scalar demo>-contour"
  EulerAngles euler;          // radians
  int resolution = 32;
  Projection projection;
  MeshStyle style = MeshStyle::mesh;
  int levels = 8;  // contour variants only

  friend bool operator==(const PanelSpec&, const PanelSpec&) = default;
};

PanelSpec default_panel_spec();

// Names of the fields that break the PanelSpec invariants; empty when valid.
std::vector<std::string> invalid_fields(const PanelSpec& spec);

nlohmann::json to_json(const PanelSpec& spec);
// Missing fields keep their defaults; throws ValidationError naming every
// malformed or unknown field.
PanelSpec panel_spec_from_json(const nlohmann::json& body);

DisplayList render_panel(const PanelSpec& spec);

// {"commands":[["M",x,y],["L",x,y],["K",x,y],["P",k]...],"bbox":[x0,y0,x1,y1]}
// with 3-decimal fixed coordinates; with a revision, it leads the object.
// Frame markers have no wire form and are skipped.
std::string serialize_display_list(const DisplayList& list);
std::string serialize_display_list(const DisplayList& list, std::uint64_t revision);

enum class ExportFormat { hpgl, svg };

struct PanelState {
  PanelSpec spec;
  std::shared_ptr<const DisplayList> list;
  std::uint64_t revision = 0;
};

struct SessionSnapshot {
  std::string id;
  std::uint64_t revision = 0;
  std::vector<PanelState> panels;
};

class SessionStore {
 public:
  using Clock = std::function<std::chrono::steady_clock::time_point()>;

  struct Limits {
    std::size_t max_sessions = 64;
    std::size_t max_panels = 16;
    std::chrono::steady_clock::duration idle_timeout = std::chrono::minutes(30);
  };

  SessionStore();
  explicit SessionStore(Limits limits, Clock clock = std::chrono::steady_clock::now);

  std::string create_session();
  std::shared_ptr<const SessionSnapshot> session(const std::string& id);
  std::uint64_t update_panel(const std::string& id, std::size_t index, const PanelSpec& spec);
  // Returns the new panel's index and the session revision.
  std::pair<std::size_t, std::uint64_t> add_panel(const std::string& id, const PanelSpec& spec);
  std::uint64_t remove_panel(const std::string& id, std::size_t index);
  PanelState panel(const std::string& id, std::size_t index);
  std::string export_panel(const std::string& id, std::size_t index, ExportFormat format);

  // Drops sessions idle longer than the timeout; returns how many.
  std::size_t evict_idle();
  std::size_t session_count() const;

 private:
  struct Session;

  std::shared_ptr<Session> find(const std::string& id);
  std::string new_id();

  Limits limits_;
  Clock clock_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::mt19937_64 rng_;
};

}  // namespace penplot
