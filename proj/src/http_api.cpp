#include "penplot/http_api.hpp"

#include <charconv>

namespace penplot {

using nlohmann::json;

namespace {

constexpr const char* kJson = "application/json";

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

void send_error(httplib::Response& res, const Error& e) {
  json body = {{"error", e.what()}};
  int status = 500;
  switch (e.code()) {
    case Errc::not_found: status = 404; break;
    case Errc::capacity: status = 409; break;
    case Errc::page_overflow: status = 422; break;
    case Errc::validation:
      status = 400;
      if (const auto* v = dynamic_cast<const ValidationError*>(&e)) body["fields"] = v->fields();
      break;
    default: break;
  }
  send_json(res, status, body);
}

std::size_t parse_index(const std::string& text) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(Errc::not_found, "no panel " + text);
  }
  return value;
}

PanelSpec parse_body(const httplib::Request& req) {
  if (req.body.empty()) return default_panel_spec();
  json body = json::parse(req.body, nullptr, false);
  if (body.is_discarded()) throw ValidationError({"body"}, "request body is not valid JSON");
  return panel_spec_from_json(body);
}

json snapshot_json(const SessionSnapshot& snap) {
  json panels = json::array();
  for (const auto& p : snap.panels) {
    json entry = to_json(p.spec);
    entry["revision"] = p.revision;
    panels.push_back(std::move(entry));
  }
  return {{"id", snap.id}, {"revision", snap.revision}, {"panels", std::move(panels)}};
}

// Wraps a handler so service errors map onto status codes.
template <typename F>
httplib::Server::Handler guarded(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const Error& e) {
      send_error(res, e);
    } catch (const std::exception& e) {
      send_json(res, 500, {{"error", e.what()}});
    }
  };
}

}  // namespace

void mount_routes(httplib::Server& server, SessionStore& store) {
  server.set_default_headers({
      {"Access-Control-Allow-Origin", "*"},
      {"Access-Control-Allow-Methods", "GET, POST, PUT, DELETE, OPTIONS"},
      {"Access-Control-Allow-Headers", "Content-Type"},
  });
  server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
  });

  server.Post("/sessions", guarded([&store](const httplib::Request&, httplib::Response& res) {
                send_json(res, 201, {{"id", store.create_session()}});
              }));

  server.Get(R"(/sessions/([0-9a-f]+))",
             guarded([&store](const httplib::Request& req, httplib::Response& res) {
               send_json(res, 200, snapshot_json(*store.session(req.matches[1])));
             }));

  server.Put(R"(/sessions/([0-9a-f]+)/panels/([^/]+))",
             guarded([&store](const httplib::Request& req, httplib::Response& res) {
               const std::string id = req.matches[1];
               const std::size_t index = parse_index(req.matches[2]);
               const PanelSpec spec = parse_body(req);
               send_json(res, 200, {{"revision", store.update_panel(id, index, spec)}});
             }));

  server.Post(R"(/sessions/([0-9a-f]+)/panels)",
              guarded([&store](const httplib::Request& req, httplib::Response& res) {
                const std::string id = req.matches[1];
                const PanelSpec spec = parse_body(req);
                auto [index, revision] = store.add_panel(id, spec);
                send_json(res, 201, {{"index", index}, {"revision", revision}});
              }));

  server.Delete(R"(/sessions/([0-9a-f]+)/panels/([^/]+))",
                guarded([&store](const httplib::Request& req, httplib::Response& res) {
                  const std::string id = req.matches[1];
                  const std::size_t index = parse_index(req.matches[2]);
                  send_json(res, 200, {{"revision", store.remove_panel(id, index)}});
                }));

  server.Get(R"(/sessions/([0-9a-f]+)/panels/([^/]+)/displaylist)",
             guarded([&store](const httplib::Request& req, httplib::Response& res) {
               const PanelState state = store.panel(req.matches[1], parse_index(req.matches[2]));
               res.set_content(serialize_display_list(*state.list, state.revision), kJson);
             }));

  server.Get(R"(/sessions/([0-9a-f]+)/panels/([^/]+)/export)",
             guarded([&store](const httplib::Request& req, httplib::Response& res) {
               const std::string id = req.matches[1];
               const std::size_t index = parse_index(req.matches[2]);
               const std::string format = req.has_param("format") ? req.get_param_value("format") : "";
               if (format == "hpgl") {
                 res.set_content(store.export_panel(id, index, ExportFormat::hpgl),
                                 "application/vnd.hp-HPGL");
               } else if (format == "svg") {
                 res.set_content(store.export_panel(id, index, ExportFormat::svg), "image/svg+xml");
               } else {
                 throw ValidationError({"format"}, "format must be hpgl or svg");
               }
             }));
}

}  // namespace penplot
