#pragma once

namespace cflex {

// Every data-parallel kernel ships a serial reference path. Serial is the
// deterministic mode; parallel runs on OpenMP when available.
enum class Execution { serial, parallel };

int max_threads();

}  // namespace cflex
