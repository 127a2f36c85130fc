#include "penplot/cli.hpp"

#include <algorithm>
#include <fstream>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"
#include "penplot/demos.hpp"
#include "penplot/dmp.hpp"
#include "penplot/expression.hpp"
#include "penplot/http_api.hpp"

namespace penplot::cli {

namespace {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string demo;
  std::string expr;
  std::string range = "-1,1";
  double phi_deg = 0, theta_deg = 0, psi_deg = 0;
  int res = 32;
  int levels = 8;
  std::string style = "mesh";
  double perspective = 0;  // eye distance; 0 keeps orthographic
  std::string format;
  std::string out = "-";
  std::string in;
  double dmp_inch = 0.005;
  std::string host = "127.0.0.1";
  int port = 8094;
};

constexpr double kDeg = std::numbers::pi / 180.0;

std::string resolve_format(const Options& o) {
  if (!o.format.empty()) return o.format;
  const auto dot = o.out.rfind('.');
  const std::string ext = dot == std::string::npos ? "" : o.out.substr(dot + 1);
  if (ext == "hpgl" || ext == "plt" || ext == "hpg") return "hpgl";
  return "svg";
}

void write_output(const Options& o, const std::string& bytes, std::ostream& out) {
  if (o.out == "-") {
    out << bytes;
    out.flush();
    return;
  }
  std::ofstream file(o.out, std::ios::binary);
  if (!file) throw IoError("cannot open '" + o.out + "' for writing");
  file << bytes;
  if (!file.flush()) throw IoError("failed writing '" + o.out + "'");
}

std::string read_input(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << file.rdbuf();
  return buf.str();
}

std::string encode(const DisplayList& list, const Options& o) {
  return resolve_format(o) == "hpgl" ? emit_hpgl(list).text() : emit_svg(list);
}

Interval parse_range(const std::string& text) {
  Interval r;
  char comma = 0;
  std::istringstream in(text);
  if (!(in >> r.lo >> comma >> r.hi) || comma != ',' || !(in >> std::ws).eof() || !(r.lo < r.hi)) {
    throw Error(Errc::validation, "--range must be lo,hi with lo < hi");
  }
  return r;
}

ScalarGrid scalar_input(const Options& o) {
  if (!o.expr.empty()) {
    const Interval r = parse_range(o.range);
    return sample_scalar(parse_expression(o.expr), r, r, Resolution{o.res});
  }
  const auto info = find_demo(o.demo);
  if (!info) throw Error(Errc::validation, "unknown demo '" + o.demo + "'");
  if (info->kind != DemoKind::scalar) {
    throw Error(Errc::validation, "demo '" + o.demo + "' is not a z = f(x, y) surface");
  }
  return sample_demo(o.demo, Resolution{o.res});
}

void cmd_render(const Options& o, std::ostream& out) {
  SurfaceOptions s;
  s.euler = {o.phi_deg * kDeg, o.theta_deg * kDeg, o.psi_deg * kDeg};
  if (o.perspective > 0) s.projection = Projection::perspective(o.perspective);
  s.style = o.style == "rows" ? MeshStyle::rows : MeshStyle::mesh;
  DisplayList list;
  const auto info = o.expr.empty() ? find_demo(o.demo) : std::nullopt;
  if (info && info->kind == DemoKind::closed) {
    list = render_closed_surface(closed_demo(o.demo, Resolution{o.res}), s);
  } else {
    list = render_scalar_surface(scalar_input(o), s);
  }
  write_output(o, encode(list, o), out);
}

void cmd_contour(const Options& o, std::ostream& out) {
  const ScalarGrid grid = scalar_input(o);
  write_output(o, encode(render_contour_plot(grid, choose_levels(grid, o.levels)), o), out);
}

void cmd_convert(const Options& o, std::ostream& out) {
  const dmp::Program program = dmp::parse(read_input(o.in));
  write_output(o, dmp::translate(program, PageSetup{}, dmp::Resolution{o.dmp_inch}).text(), out);
}

int cmd_serve(const Options& o, std::ostream& err) {
  SessionStore store;
  httplib::Server server;
  mount_routes(server, store);
  if (!server.bind_to_port(o.host, o.port)) {
    err << "error: cannot listen on " << o.host << ":" << o.port << "\n";
    return io_failure;
  }
  err << "serving on http://" << o.host << ":" << o.port << "\n";
  server.listen_after_bind();
  return ok;
}

void add_surface_flags(CLI::App* cmd, Options& o) {
  auto* demo = cmd->add_option("--demo", o.demo, "built-in surface");
  cmd->add_option("--expr", o.expr, "expression in x, y, r")->excludes(demo);
  cmd->add_option("--range", o.range, "sampling interval lo,hi for --expr (both axes)");
  cmd->add_option("--res", o.res, "samples per axis")->check(CLI::Range(2, 512));
}

void add_output_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--format", o.format, "hpgl or svg (default from --out)")
      ->check(CLI::IsMember({"hpgl", "svg"}));
  cmd->add_option("--out", o.out, "output file, - for stdout");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"surface, contour and plotter-language tool", "penplot"};
  app.require_subcommand(1);
  Options o;
  const View view = default_view();
  o.phi_deg = view.euler.phi / kDeg;
  o.theta_deg = view.euler.theta / kDeg;
  o.psi_deg = view.euler.psi / kDeg;

  auto* render = app.add_subcommand("render", "draw a 3D surface with hidden lines removed");
  add_surface_flags(render, o);
  render->add_option("--phi", o.phi_deg, "Euler angle phi, degrees");
  render->add_option("--theta", o.theta_deg, "Euler angle theta, degrees");
  render->add_option("--psi", o.psi_deg, "Euler angle psi, degrees");
  render->add_option("--style", o.style)->check(CLI::IsMember({"rows", "mesh"}));
  render->add_option("--perspective", o.perspective, "eye distance (orthographic if omitted)")
      ->check(CLI::PositiveNumber);
  add_output_flags(render, o);

  auto* contour = app.add_subcommand("contour", "draw iso-lines of a surface in plan view");
  add_surface_flags(contour, o);
  contour->add_option("--levels", o.levels, "number of levels")->check(CLI::Range(1, 64));
  add_output_flags(contour, o);

  auto* convert = app.add_subcommand("convert", "translate a DM/PL program to HP-GL");
  convert->add_option("--in", o.in, "DM/PL input file")->required();
  convert->add_option("--out", o.out, "output file, - for stdout");
  convert->add_option("--dmp-inch", o.dmp_inch, "inches per DM/PL unit")->check(CLI::PositiveNumber);

  auto* serve = app.add_subcommand("serve", "run the HTTP session service");
  serve->add_option("--port", o.port)->check(CLI::Range(1, 65535));
  serve->add_option("--host", o.host);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : validation_failure;
  }
  if (o.demo.empty() && o.expr.empty()) o.demo = "sinc";

  try {
    if (render->parsed()) cmd_render(o, out);
    if (contour->parsed()) cmd_contour(o, out);
    if (convert->parsed()) cmd_convert(o, out);
    if (serve->parsed()) return cmd_serve(o, err);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return io_failure;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return validation_failure;
  }
  return ok;
}

}  // namespace penplot::cli
