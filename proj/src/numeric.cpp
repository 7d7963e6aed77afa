#include "clustercert/numeric.hpp"

#include <cstdlib>
#include <string>
#include <thread>

namespace clustercert {

int resolve_worker_count(int requested) {
    if (requested > 0) return requested > 8 ? 8 : requested;
    if (const char* env = std::getenv("CLUSTERCERT_WORKERS")) {
        try {
            int n = std::stoi(env);
            if (n > 0) return n > 8 ? 8 : n;
        } catch (...) {
            // Malformed value: fall through to hardware default.
        }
    }
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    return hw > 8 ? 8 : static_cast<int>(hw);
}

}  // namespace clustercert
