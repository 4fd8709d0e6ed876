#pragma once

#include <string_view>

namespace lsa::resources {

/// Text compiled into the library (templates, stopword lists). Empty view
/// when the name is unknown.
std::string_view find_embedded_resource(std::string_view name);

}  // namespace lsa::resources
