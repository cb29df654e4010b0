#include "hazsearch/distance.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <unordered_map>

#include "hazsearch/errors.hpp"

namespace hazsearch {

namespace {

// Sequences are packed into a 64-bit word, one alphabet index per digit of
// `bits` width, so BFS states are cheap to hash, store, and mutate.
struct Codec {
    const std::string& alphabet;
    int m;       // sequence length
    int bits;    // bits per digit
    std::uint64_t digit_mask;
    std::uint64_t full_mask;

    Codec(const std::string& alpha, int length) : alphabet(alpha), m(length) {
        bits = 1;
        while ((1u << bits) < alphabet.size()) ++bits;
        if (m * bits > 48)
            throw UsageError("error_distance: sequence length " + std::to_string(m) +
                             " over alphabet of " + std::to_string(alphabet.size()) +
                             " is too large for exact search");
        digit_mask = (std::uint64_t{1} << bits) - 1;
        full_mask = (m * bits == 64) ? ~std::uint64_t{0}
                                     : (std::uint64_t{1} << (m * bits)) - 1;
    }

    std::uint64_t encode(const std::string& s) const {
        std::uint64_t code = 0;
        for (int i = 0; i < m; ++i) {
            const auto pos = alphabet.find(s[i]);
            if (pos == std::string::npos)
                throw UsageError(std::string("error_distance: unknown action symbol '") +
                                 s[i] + "'");
            code |= static_cast<std::uint64_t>(pos) << (i * bits);
        }
        return code;
    }

    std::uint64_t digit(std::uint64_t code, int i) const {
        return (code >> (i * bits)) & digit_mask;
    }

    // All sequences one deviation away.  |out| is cleared first.
    void neighbors(std::uint64_t code, std::vector<std::uint64_t>& out) const {
        out.clear();
        const std::uint64_t k = alphabet.size();
        for (int i = 0; i < m; ++i) {
            const std::uint64_t low_mask = (std::uint64_t{1} << (i * bits)) - 1;
            const std::uint64_t low = code & low_mask;
            // insertion at slot i (last digit dropped)
            const std::uint64_t shifted_up =
                ((code >> (i * bits)) << ((i + 1) * bits)) & full_mask;
            for (std::uint64_t c = 0; c < k; ++c)
                out.push_back(low | (c << (i * bits)) | shifted_up);
            // omission at i (arbitrary digit appended)
            const std::uint64_t shifted_down = (code >> ((i + 1) * bits)) << (i * bits);
            for (std::uint64_t c = 0; c < k; ++c)
                out.push_back(low | shifted_down | (c << ((m - 1) * bits)));
            // substitution at i
            const std::uint64_t cur = digit(code, i);
            const std::uint64_t cleared = code & ~(digit_mask << (i * bits));
            for (std::uint64_t c = 0; c < k; ++c)
                if (c != cur) out.push_back(cleared | (c << (i * bits)));
            // transposition of i and i+1
            if (i + 1 < m) {
                const std::uint64_t nxt = digit(code, i + 1);
                if (nxt != cur) {
                    std::uint64_t swapped =
                        code & ~((digit_mask << (i * bits)) | (digit_mask << ((i + 1) * bits)));
                    swapped |= nxt << (i * bits);
                    swapped |= cur << ((i + 1) * bits);
                    out.push_back(swapped);
                }
            }
        }
    }
};

// Visited/dist store: flat array when the coded space is small, hash map
// otherwise.
class DistMap {
public:
    DistMap(int m, int bits) {
        const int total_bits = m * bits;
        if (total_bits <= 26) flat_.assign(std::size_t{1} << total_bits, -1);
    }

    int get(std::uint64_t code) const {
        if (!flat_.empty()) return flat_[code];
        const auto it = map_.find(code);
        return it == map_.end() ? -1 : it->second;
    }

    void set(std::uint64_t code, int d) {
        if (!flat_.empty())
            flat_[code] = d;
        else
            map_[code] = d;
    }

private:
    std::vector<int> flat_;
    std::unordered_map<std::uint64_t, int> map_;
};

// Breadth-first search from `src`.  Stops early once `stop_at` is settled;
// without one it sweeps the whole reachable space.
DistMap bfs(const Codec& codec, std::uint64_t src,
            std::optional<std::uint64_t> stop_at = std::nullopt) {
    DistMap dist(codec.m, codec.bits);
    dist.set(src, 0);
    std::vector<std::uint64_t> frontier{src};
    std::vector<std::uint64_t> next;
    std::vector<std::uint64_t> scratch;
    int depth = 0;
    while (!frontier.empty()) {
        if (stop_at && dist.get(*stop_at) >= 0) break;
        ++depth;
        next.clear();
        for (const std::uint64_t code : frontier) {
            codec.neighbors(code, scratch);
            for (const std::uint64_t n : scratch) {
                if (dist.get(n) >= 0) continue;
                dist.set(n, depth);
                next.push_back(n);
            }
        }
        frontier.swap(next);
    }
    return dist;
}

void check_pair(const std::string& a, const std::string& b) {
    if (a.size() != b.size())
        throw UsageError("error_distance: sequences have different lengths (" +
                         std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
    if (a.empty()) throw UsageError("error_distance: empty sequence");
}

} // namespace

int error_distance(const std::string& a, const std::string& b, const std::string& alphabet) {
    check_pair(a, b);
    const Codec codec(alphabet, static_cast<int>(a.size()));
    const std::uint64_t ca = codec.encode(a);
    const std::uint64_t cb = codec.encode(b);
    if (ca == cb) return 0;
    const DistMap dist = bfs(codec, ca, cb);
    return dist.get(cb);  // substitutions alone connect equal-length sequences
}

std::vector<int> distances_from(const std::string& source,
                                const std::vector<std::string>& targets,
                                const std::string& alphabet) {
    if (source.empty()) throw UsageError("error_distance: empty sequence");
    const Codec codec(alphabet, static_cast<int>(source.size()));
    const DistMap dist = bfs(codec, codec.encode(source));
    std::vector<int> out;
    out.reserve(targets.size());
    for (const auto& t : targets) {
        check_pair(source, t);
        out.push_back(dist.get(codec.encode(t)));
    }
    return out;
}

void sort_by_distance(CandidateSet& candidates, const std::string& nominal,
                      const std::string& alphabet) {
    std::vector<std::string> seqs;
    seqs.reserve(candidates.size());
    for (const auto& e : candidates.entries) seqs.push_back(e.sequence);
    const std::vector<int> ds = distances_from(nominal, seqs, alphabet);
    for (std::size_t i = 0; i < candidates.entries.size(); ++i)
        candidates.entries[i].distance = ds[i];
    std::sort(candidates.entries.begin(), candidates.entries.end(),
              [](const CandidateEntry& a, const CandidateEntry& b) {
                  if (*a.distance != *b.distance) return *a.distance < *b.distance;
                  return a.sequence < b.sequence;
              });
}

} // namespace hazsearch
