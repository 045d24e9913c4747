#pragma once

#include <iosfwd>

namespace checkers {

// Line-delimited JSON environment protocol (version 1, see docs/protocol.md).
// Reads requests until end-of-input; writes exactly one response line each.
int serve_session(std::istream& in, std::ostream& out);

}  // namespace checkers
