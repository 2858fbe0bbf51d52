// SPDX-License-Identifier: Apache-2.0
// Python bindings. Structured results cross the boundary as JSON text; the ami package
// decodes them (see python/ami/__init__.py).

#include "ami/app/backend.hpp"
#include "ami/app/config.hpp"
#include "ami/common/error.hpp"
#include "ami/ingest/auth.hpp"
#include "ami/ingest/validation.hpp"
#include "ami/irr/report.hpp"
#include "ami/openapi/bridge.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

namespace py = pybind11;
using nlohmann::json;

namespace {

ami::irr::KappaScheme scheme_from(const std::string& name)
{
    if (name == "quadratic")
        return ami::irr::KappaScheme::quadratic;
    if (name == "linear")
        return ami::irr::KappaScheme::linear;
    throw ami::Error(ami::Errc::invalid_argument, "scheme must be \"quadratic\" or \"linear\", got \"" + name + "\"");
}

std::string validate_payload(const std::string& body)
{
    const auto parsed = json::parse(body, nullptr, false);
    if (parsed.is_discarded())
        return json{{"ok", false}, {"field", "body"}, {"message", "body is not valid JSON"}}.dump();
    const auto outcome = ami::ingest::validate_sensor_payload(parsed);
    if (const auto* v = std::get_if<ami::timeseries::FieldViolation>(&outcome))
        return json{{"ok", false}, {"field", v->field}, {"message", v->message}}.dump();
    const auto& r = std::get<ami::timeseries::SensorReading>(outcome);
    return json{{"ok", true}, {"reading", ami::timeseries::to_json(ami::timeseries::StoredReading{0, r})}}.dump();
}

class PyBackend {
public:
    explicit PyBackend(const ami::app::Config& config) : backend_(std::make_unique<ami::app::Backend>(config)) {}

    py::tuple request(const std::string& method, const std::string& path, const std::string& body,
                      const std::map<std::string, std::string>& headers, const std::map<std::string, std::string>& query)
    {
        ami::ingest::HttpRequest req{method, path, {}, query, body};
        for (const auto& [k, v] : headers) {
            std::string key = k;
            for (auto& c : key)
                c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
            req.headers[key] = v;
        }
        ami::ingest::HttpResponse res;
        {
            py::gil_scoped_release release;
            res = backend_->api().handle(req);
        }
        return py::make_tuple(res.status, res.content_type, py::bytes(res.body));
    }

    std::optional<std::string> mcp(const std::string& message, const std::string& user)
    {
        if (!backend_->users().contains(user))
            throw ami::Error(ami::Errc::unknown_user, "unknown user: " + user);
        py::gil_scoped_release release;
        return backend_->mcp_server().handle_message(message, user);
    }

    std::string open_session(const std::string& user)
    {
        if (!backend_->users().contains(user))
            throw ami::Error(ami::Errc::unknown_user, "unknown user: " + user);
        return backend_->sessions().open(user).token;
    }

    std::string openapi() { return ami::openapi::registry_to_openapi(backend_->registry().definitions()).dump(); }
    std::size_t reading_count() { return backend_->readings().size(); }
    void flush() { backend_->flush(); }

private:
    std::unique_ptr<ami::app::Backend> backend_;
};

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "AMI air-quality assistant core";
    py::register_exception<ami::Error>(m, "AmiError", PyExc_ValueError);

    m.def(
        "evaluate_irr_csv",
        [](const std::string& csv_text, const std::string& scheme, int scale_max) {
            const auto s = scheme_from(scheme);
            return ami::irr::reports_to_json(ami::irr::evaluate_csv_text(csv_text, s, scale_max), s).dump();
        },
        py::arg("csv_text"), py::arg("scheme") = "quadratic", py::arg("scale_max") = 5,
        "Agreement report for criterion,rater,item,score CSV text, as JSON.");
    m.def(
        "irr_table",
        [](const std::string& csv_text, const std::string& scheme, int scale_max) {
            const auto s = scheme_from(scheme);
            return ami::irr::render_table(ami::irr::evaluate_csv_text(csv_text, s, scale_max), s);
        },
        py::arg("csv_text"), py::arg("scheme") = "quadratic", py::arg("scale_max") = 5);
    m.def(
        "weighted_kappa",
        [](std::vector<std::vector<int>> scores, const std::string& scheme, int scale_max) {
            return ami::irr::weighted_kappa(ami::irr::RatingMatrix(std::move(scores), scale_max), scheme_from(scheme));
        },
        py::arg("scores"), py::arg("scheme") = "quadratic", py::arg("scale_max") = 5,
        "Mean pairwise weighted kappa; scores[rater][item].");
    m.def(
        "icc_3_1",
        [](std::vector<std::vector<int>> scores, int scale_max) {
            return ami::irr::icc_3_1(ami::irr::RatingMatrix(std::move(scores), scale_max));
        },
        py::arg("scores"), py::arg("scale_max") = 5);
    m.def(
        "mean_absolute_difference",
        [](std::vector<std::vector<int>> scores, int scale_max) {
            return ami::irr::mean_absolute_difference(ami::irr::RatingMatrix(std::move(scores), scale_max));
        },
        py::arg("scores"), py::arg("scale_max") = 5);

    m.def("validate_sensor_payload", &validate_payload, py::arg("body"),
          "JSON: {ok: true, reading} or {ok: false, field, message}.");
    m.def("hash_password", [](const std::string& p, int it) { return ami::ingest::hash_password(p, it); },
          py::arg("password"), py::arg("iterations") = ami::ingest::kDefaultPbkdf2Iterations);
    m.def("verify_password", [](const std::string& p, const std::string& enc) { return ami::ingest::verify_password(p, enc); },
          py::arg("password"), py::arg("encoded"));

    py::class_<PyBackend>(m, "Backend")
        .def_static(
            "from_config_file",
            [](const std::string& path) { return std::make_unique<PyBackend>(ami::app::load_config(path)); },
            py::arg("path"))
        .def_static(
            "from_config_text",
            [](const std::string& text, const std::string& base_dir) {
                const auto cfg = ami::app::parse_config(text, base_dir);
                ami::app::validate(cfg);
                return std::make_unique<PyBackend>(cfg);
            },
            py::arg("text"), py::arg("base_dir") = "")
        .def("request", &PyBackend::request, py::arg("method"), py::arg("path"), py::arg("body") = "",
             py::arg("headers") = std::map<std::string, std::string>{}, py::arg("query") = std::map<std::string, std::string>{},
             "(status, content_type, body bytes) for one REST or /mcp request.")
        .def("mcp", &PyBackend::mcp, py::arg("message"), py::arg("user"),
             "JSON-RPC response line, or None for a notification.")
        .def("open_session", &PyBackend::open_session, py::arg("user"))
        .def("openapi", &PyBackend::openapi)
        .def("reading_count", &PyBackend::reading_count)
        .def("flush", &PyBackend::flush);
}
