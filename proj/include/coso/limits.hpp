#pragma once

namespace coso {

// Cap on |X| for exhaustive partition or power-set enumeration. Defaults to
// 12; the COSO_EXHAUSTIVE_LIMIT environment variable overrides it.
int exhaustive_limit();

// Cap on |V| for the fusion-family search inside the parametric engine.
// Follows COSO_EXHAUSTIVE_LIMIT when that is set above 16.
int par_user_limit();

}  // namespace coso
