#pragma once

// JSON-over-HTTP wire interface of the session service.
//
//   POST   /sessions                               -> {"id":...}
//   GET    /sessions/{id}                          -> {"id","revision","panels":[{spec...,"revision"}]}
//   PUT    /sessions/{id}/panels/{i}               body: PanelSpec JSON -> {"revision"}
//   POST   /sessions/{id}/panels                   body: PanelSpec JSON -> {"index","revision"}
//   DELETE /sessions/{id}/panels/{i}               -> {"revision"}
//   GET    /sessions/{id}/panels/{i}/displaylist   -> {"revision","commands","bbox"}
//   GET    /sessions/{id}/panels/{i}/export?format=hpgl|svg
//
// Errors are {"error": message} with 404 (not found), 400 (validation, plus
// "fields"), 409 (capacity) or 422 (page overflow).

#include "httplib.h"
#include "penplot/service.hpp"

namespace penplot {

void mount_routes(httplib::Server& server, SessionStore& store);

}  // namespace penplot
