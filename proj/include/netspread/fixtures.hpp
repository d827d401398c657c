#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include <netspread/graph.hpp>

namespace netspread {

/// Built-in demo networks, so that worked examples and golden tests never
/// depend on a generator seed.
///
///   fig6 - 4-node bridge network
///   fig7 - 8-node, 12-edge preferential-attachment sample
inline Graph fixture(std::string_view name) {
    if (name == "fig6")
        return from_edge_list({{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}}, 4);
    if (name == "fig7")
        return from_edge_list({{0, 2}, {0, 3}, {1, 3}, {1, 5}, {2, 3}, {2, 7},
                               {3, 4}, {3, 5}, {3, 6}, {4, 5}, {5, 7}, {6, 7}},
                              8);
    throw std::invalid_argument("unknown fixture: " + std::string(name) +
                                " (available: fig6, fig7)");
}

}  // namespace netspread
