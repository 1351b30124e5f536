#ifndef WELLDIST_STATE_IO_HPP
#define WELLDIST_STATE_IO_HPP

#include <string>

#include <welldist/construction.hpp>

namespace welldist {

// Versioned JSON encoding of a construction state; exact values travel as
// base:exponent:hex triples (or decimal strings for plain integers) so the
// round trip is lossless.
std::string state_to_json(const ConstructionState& state);
ConstructionState state_from_json(const std::string& text);

void save_state(const ConstructionState& state, const std::string& path);
ConstructionState load_state(const std::string& path);

} // namespace welldist

#endif // WELLDIST_STATE_IO_HPP
