#pragma once

#include "nifs/geometry.hpp"
#include "nifs/maps.hpp"
#include "nifs/system.hpp"

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nifs {

// Per-stage statistics of the images phi_i^(j)(X): clearance b from the
// seed boundary, smallest pairwise gap delta, largest diameter eta. Each is
// conservative in the certifying direction.
struct SeparationReport {
    int stage = 0;
    double b_lower = 0.0;
    double delta_lower = 0.0;
    double eta_upper = 0.0;
    double ratio = 0.0;  // delta_lower / eta_upper
    bool strong_separation = false;
    bool degenerate = false;  // fewer than two maps: delta is undefined
};

// delta_lower must exceed this for a stage to count as strongly separated.
inline constexpr double kSeparationFloor = 1e-12;

SeparationReport separation_report(const System& sys, int j);

/// diam(X) / min b over the reports. ErrorKind::precondition when some b is 0.
double default_c(const System& sys, std::span<const SeparationReport> reports);

struct CertificateEntry {
    int n = 0;
    int stage = 0;
    int label = 0;  // m_n, the label of the surrounded map
    RoundAnnulus base;
    RoundAnnulus pushed;
    double modulus_lower = 0.0;
    double diameter = 0.0;
    bool separation_verified = false;
};

struct DroppedEntry {
    int n = 0;
    int stage = 0;
    double base_modulus = 0.0;  // log(delta / (c eta)), possibly <= 0
    std::string reason;
};

enum class Verdict { certified, inconclusive };

std::string_view to_string(Verdict v);

struct ThinnessCertificate {
    std::string system_descriptor;
    double c = 0.0;
    std::string word_rule;
    std::vector<int> word;  // omega_1 .. omega_{last j_n}
    std::vector<CertificateEntry> entries;
    Verdict verdict = Verdict::inconclusive;

    // Not serialized.
    std::vector<DroppedEntry> dropped;
    Point witness{};  // center of the deepest enclosure of pi(omega)
};

// Chooses omega_j. The defaults take the smallest label everywhere.
struct WordRule {
    std::function<int(int, const Stage&)> surrounded;
    std::function<int(int, const Stage&)> filler;
    std::string description = "m_n=smallest label; filler=smallest label";
};

struct CertificateOptions {
    std::optional<double> c;                  // default_c over the subsequence when empty
    WordRule word_rule;
    std::map<int, RoundAnnulus> base_overrides;  // stage -> user supplied A_j
};

/// Image of a round annulus under m. Exact for affine m. Otherwise a round
/// annulus centred at m(hole_witness) that lies inside m(A); throws
/// ErrorKind::degenerate_annulus when no such annulus survives the padding.
RoundAnnulus pushforward_annulus(const ConformalMapExpr& m, const RoundAnnulus& a, Point hole_witness,
                                 int samples = 256);

struct LevelSeparation {
    bool separated = false;
    bool target_in_hole = false;
    std::size_t nodes = 0;
};

/// Tests the annulus against every level-j piece, descending the word tree
/// and pruning subtrees whose enclosure already sits in one complementary
/// component. `target` (length j) must land in the hole.
LevelSeparation separates_level(const System& sys, const RoundAnnulus& a, int j, std::span<const int> target);

ThinnessCertificate build_certificate(const System& sys, std::span<const int> subsequence,
                                      const CertificateOptions& options = {});

/// Pushes a certificate for sys through the map with `label` of the
/// prepended stage; the result refers to prepend_stage(sys, first).
ThinnessCertificate push_forward_certificate(const System& extended, const ThinnessCertificate& cert, int label);

struct VerifyResult {
    bool ok = false;
    std::string diagnostic;
    std::optional<std::size_t> entry;
};

VerifyResult verify_certificate(const System& sys, const ThinnessCertificate& cert);

std::string certificate_to_json(const ThinnessCertificate& cert);
ThinnessCertificate certificate_from_json(std::string_view text);

} // namespace nifs
