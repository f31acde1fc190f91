#include "takeover/chain.hpp"

#include "takeover/errors.hpp"

#include <string>

namespace takeover {

Chain make_chain(int length) {
    std::vector<int> down(length + 1, 0), up(length + 1, 0);
    for (int a = 1; a < length; ++a) {
        down[a] = a - 1;
        up[a] = a + 1;
    }
    return make_chain(length, std::move(down), std::move(up));
}

Chain make_chain(int length, std::vector<int> down, std::vector<int> up) {
    std::vector<std::string> issues;
    if (length < 1) issues.push_back("chain: length must be at least 1, got " + std::to_string(length));
    if (length >= 1) {
        if ((int)down.size() != length + 1) issues.push_back("chain.down: expected " + std::to_string(length + 1) + " entries");
        if ((int)up.size() != length + 1) issues.push_back("chain.up: expected " + std::to_string(length + 1) + " entries");
    }
    if (issues.empty()) {
        for (int a = 1; a < length; ++a) {
            if (!(0 <= down[a] && down[a] < a))
                issues.push_back("chain.down[" + std::to_string(a) + "]: must lie strictly below the node");
            if (!(a < up[a] && up[a] <= length))
                issues.push_back("chain.up[" + std::to_string(a) + "]: must lie strictly above the node");
        }
    }
    if (!issues.empty()) throw SpecError(issues);
    Chain c;
    c.length = length;
    c.down = std::move(down);
    c.up = std::move(up);
    return c;
}

static bool same_action(ChainAction x, ChainAction y) {
    if (x.takeover != y.takeover) return false;
    return x.takeover || x.target == y.target;
}

static void check_action(const Chain& c, int current, ChainAction act, bool defender) {
    if (act.takeover) {
        if (current != 0 && current != c.length)
            throw SpecError("chain next_node: takeover action only exists at the end nodes");
        return;
    }
    if (act.target == current) return;
    if (current == 0 || current == c.length)
        throw SpecError("chain next_node: end nodes only allow idling or takeover");
    int allowed = defender ? c.down[current] : c.up[current];
    if (act.target != allowed)
        throw SpecError("chain next_node: target " + std::to_string(act.target) +
                        " is not available at node " + std::to_string(current));
}

int next_node(const Chain& c, int current, ChainAction d, ChainAction a) {
    if (current < 0 || current > c.length) throw SpecError("chain next_node: node out of range");
    check_action(c, current, d, true);
    check_action(c, current, a, false);

    if (same_action(d, a)) return current == 0 || current == c.length ? current : d.target;
    if (current == 0 && a.takeover && !d.takeover) return 1;          // unopposed escalation
    if (current == c.length && d.takeover && !a.takeover) return c.length - 1;  // unopposed pushback
    if (current == 0 || current == c.length) return current;          // lone takeover of the held end node
    if (!d.takeover && !a.takeover) {
        if (d.target != current && a.target == current) return d.target;
        if (a.target != current && d.target == current) return a.target;
    }
    return current;  // contested: both reached for different nodes
}

}  // namespace takeover
