#pragma once

// Path shim: the project vendors nlohmann/json as a flat single header in
// vendor/json.hpp; sources use the conventional <nlohmann/json.hpp> include.
#include <json.hpp>
