#include "trumor/http.hpp"

#include "httplib.h"
#include "trumor/errors.hpp"

namespace trumor::http {

Endpoint parse_url(const std::string& url) {
    const std::string scheme = "http://";
    if (url.rfind(scheme, 0) != 0) throw InputError("only http:// endpoints are supported: " + url);
    const auto slash = url.find('/', scheme.size());
    Endpoint ep;
    ep.scheme_host_port = url.substr(0, slash);
    ep.path = slash == std::string::npos ? "/" : url.substr(slash);
    if (ep.scheme_host_port.size() == scheme.size()) throw InputError("endpoint has no host: " + url);
    return ep;
}

Response post_json(const Endpoint& ep, const std::string& body, std::chrono::milliseconds timeout,
                   const std::map<std::string, std::string>& headers) {
    httplib::Client cli(ep.scheme_host_port);
    const auto secs = timeout.count() / 1000;
    const auto usecs = (timeout.count() % 1000) * 1000;
    cli.set_connection_timeout(secs, usecs);
    cli.set_read_timeout(secs, usecs);
    cli.set_write_timeout(secs, usecs);
    httplib::Headers h;
    for (const auto& [k, v] : headers) h.emplace(k, v);
    auto res = cli.Post(ep.path, h, body, "application/json");
    if (!res) {
        const auto err = res.error();
        throw TransportError("request to " + ep.scheme_host_port + ep.path + " failed: " +
                                 httplib::to_string(err),
                             /*retriable=*/true);
    }
    return {res->status, res->body};
}

}  // namespace trumor::http
