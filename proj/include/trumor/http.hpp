#pragma once

#include <chrono>
#include <map>
#include <string>

namespace trumor::http {

struct Endpoint {
    std::string scheme_host_port;  // "http://host:port"
    std::string path;              // "/v1/embed"
};

/// Splits "http://host[:port]/path". Throws InputError on anything else.
Endpoint parse_url(const std::string& url);

struct Response {
    int status = 0;
    std::string body;
};

/// POSTs a JSON body. Connection failures and timeouts raise a retriable
/// TransportError; any HTTP status is returned to the caller.
Response post_json(const Endpoint& ep, const std::string& body, std::chrono::milliseconds timeout,
                   const std::map<std::string, std::string>& headers = {});

}  // namespace trumor::http
