#ifndef VFREE_ERRORS_HPP
#define VFREE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace vfree {

// Error categories map 1:1 onto CLI exit codes (see tools/vfree_count.cpp).
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed or invalid input (bad file, bad graph, bad flag value). Exit code 2.
struct input_error : error {
    using error::error;
};

// An operation was called outside its stated precondition. Exit code 3.
struct precondition_error : error {
    using error::error;
};

// A configured search/size budget was exhausted before an answer was found.
// Never a mathematical claim. Exit code 4.
struct budget_error : error {
    using error::error;
};

// Internal consistency check failed; indicates an implementation bug. Exit code 5.
struct internal_error : error {
    using error::error;
};

} // namespace vfree

#endif
