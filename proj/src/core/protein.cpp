#include "mmdiff/core/protein.hpp"

#include <array>
#include <cctype>
#include <cmath>

#include "mmdiff/core/error.hpp"

namespace mmdiff::protein {

namespace {

struct ResidueInfo {
  const char* three;
  char one;
  ChemClass cls;
  double max_asa;  // Tien et al. theoretical Gly-X-Gly values, A^2
};

// Alphabetical by three-letter code; index = token.
constexpr std::array<ResidueInfo, kNumTokens> kResidues{{
    {"ALA", 'A', ChemClass::Hydrophobic, 129.0},
    {"ARG", 'R', ChemClass::Positive, 274.0},
    {"ASN", 'N', ChemClass::Polar, 195.0},
    {"ASP", 'D', ChemClass::Negative, 193.0},
    {"CYS", 'C', ChemClass::Special, 167.0},
    {"GLN", 'Q', ChemClass::Polar, 225.0},
    {"GLU", 'E', ChemClass::Negative, 223.0},
    {"GLY", 'G', ChemClass::Special, 104.0},
    {"HIS", 'H', ChemClass::Positive, 224.0},
    {"ILE", 'I', ChemClass::Hydrophobic, 197.0},
    {"LEU", 'L', ChemClass::Hydrophobic, 201.0},
    {"LYS", 'K', ChemClass::Positive, 236.0},
    {"MET", 'M', ChemClass::Hydrophobic, 224.0},
    {"PHE", 'F', ChemClass::Hydrophobic, 240.0},
    {"PRO", 'P', ChemClass::Special, 159.0},
    {"SER", 'S', ChemClass::Polar, 155.0},
    {"THR", 'T', ChemClass::Polar, 172.0},
    {"TRP", 'W', ChemClass::Hydrophobic, 285.0},
    {"TYR", 'Y', ChemClass::Polar, 263.0},
    {"VAL", 'V', ChemClass::Hydrophobic, 174.0},
    {"UNK", 'X', ChemClass::Special, 200.0},
}};

constexpr int kArg = 1, kAsp = 3, kCys = 4, kGlu = 6, kHis = 8, kLys = 11,
              kPhe = 13, kTrp = 17, kTyr = 18;
constexpr int kAla = 0, kIle = 9, kLeu = 10, kMet = 12, kPro = 14, kVal = 19;

void check_token(int token) {
  if (token < 0 || token >= kNumTokens)
    throw DomainError("residue token out of range: " + std::to_string(token));
}

std::string upcase(const std::string& s) {
  std::string out = s;
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

double entropy_max() {
  static const double v = std::log(20.0);
  return v;
}

Vocabulary vocabulary() { return Vocabulary{kNumTokens}; }

std::string to_string(ChemClass c) {
  switch (c) {
    case ChemClass::Hydrophobic: return "hydrophobic";
    case ChemClass::Polar: return "polar";
    case ChemClass::Positive: return "positive";
    case ChemClass::Negative: return "negative";
    case ChemClass::Special: return "special";
  }
  throw DomainError("invalid chemical class");
}

int token_from_three(const std::string& three) {
  const std::string t = upcase(three);
  for (int i = 0; i < kNumTokens; ++i)
    if (t == kResidues[static_cast<std::size_t>(i)].three) return i;
  return kUnknownToken;
}

int token_from_one(char one) {
  const char c = static_cast<char>(std::toupper(static_cast<unsigned char>(one)));
  for (int i = 0; i < kNumTokens; ++i)
    if (c == kResidues[static_cast<std::size_t>(i)].one) return i;
  return kUnknownToken;
}

const std::string& three_from_token(int token) {
  check_token(token);
  static const std::array<std::string, kNumTokens> names = [] {
    std::array<std::string, kNumTokens> out;
    for (int i = 0; i < kNumTokens; ++i)
      out[static_cast<std::size_t>(i)] = kResidues[static_cast<std::size_t>(i)].three;
    return out;
  }();
  return names[static_cast<std::size_t>(token)];
}

char one_from_token(int token) {
  check_token(token);
  return kResidues[static_cast<std::size_t>(token)].one;
}

ChemClass chem_class(int token) {
  check_token(token);
  return kResidues[static_cast<std::size_t>(token)].cls;
}

int formal_charge(int token) {
  check_token(token);
  if (token == kArg || token == kLys) return 1;
  if (token == kAsp || token == kGlu) return -1;
  return 0;
}

bool is_cysteine(int token) {
  check_token(token);
  return token == kCys;
}

bool is_cation(int token) {
  check_token(token);
  return token == kArg || token == kLys;
}

bool is_aromatic(int token) {
  check_token(token);
  return token == kPhe || token == kTyr || token == kTrp || token == kHis;
}

bool is_hydrophobic(int token) {
  check_token(token);
  return token == kAla || token == kVal || token == kIle || token == kLeu ||
         token == kMet || token == kPhe || token == kTrp || token == kPro;
}

int net_charge(const std::vector<int>& tokens) {
  int q = 0;
  for (int t : tokens) q += formal_charge(t);
  return q;
}

bool has_his_run(const std::vector<int>& tokens, int min_run) {
  int run = 0;
  for (int t : tokens) {
    run = (t == kHis) ? run + 1 : 0;
    if (run >= min_run) return true;
  }
  return false;
}

double vdw_radius(const std::string& element) {
  const std::string e = upcase(element);
  if (e == "H") return 1.20;
  if (e == "C") return 1.70;
  if (e == "N") return 1.55;
  if (e == "O") return 1.52;
  if (e == "S") return 1.80;
  if (e == "P") return 1.80;
  if (e == "SE") return 1.90;
  if (e == "F") return 1.47;
  if (e == "CL") return 1.75;
  if (e == "BR") return 1.85;
  if (e == "I") return 1.98;
  if (e == "FE") return 2.00;
  if (e == "ZN") return 1.39;
  if (e == "MG") return 1.73;
  if (e == "CA") return 2.31;
  if (e == "NA") return 2.27;
  if (e == "K") return 2.75;
  if (e == "CU") return 1.40;
  if (e == "MN") return 2.00;
  if (e == "NI") return 1.63;
  if (e == "CO") return 2.00;
  return 1.80;
}

double max_asa(int token) {
  check_token(token);
  return kResidues[static_cast<std::size_t>(token)].max_asa;
}

}  // namespace mmdiff::protein
