#pragma once

namespace mimolfb {

// git-describe style version string, e.g. "v0.1.0-g1a2b3c4".
const char* version();

}  // namespace mimolfb
