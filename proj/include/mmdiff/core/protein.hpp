#pragma once

#include <string>
#include <vector>

#include "mmdiff/core/types.hpp"

namespace mmdiff::protein {

// Token layout: 20 standard residues in alphabetical three-letter order,
// then UNK; the mask token sits one past the real vocabulary.
inline constexpr int kNumStandard = 20;
inline constexpr int kUnknownToken = 20;
inline constexpr int kNumTokens = 21;

// Maximum per-position entropy used by entropy-adaptive temperature: the
// schedule treats the 20 standard residues as the support.
double entropy_max();

Vocabulary vocabulary();  // size 21, mask id 21

enum class ChemClass { Hydrophobic, Polar, Positive, Negative, Special };

std::string to_string(ChemClass c);

// Three-letter residue name -> token; unknown names map to UNK.
int token_from_three(const std::string& three);
// One-letter code -> token; unknown letters map to UNK.
int token_from_one(char one);
const std::string& three_from_token(int token);
char one_from_token(int token);

ChemClass chem_class(int token);

// Formal side-chain charge at neutral pH: Arg/Lys +1, Asp/Glu -1,
// His and everything else 0.
int formal_charge(int token);

bool is_cysteine(int token);
// Cationic side chains for cation-pi contacts: Arg, Lys.
bool is_cation(int token);
// Aromatic side chains for cation-pi contacts: Phe, Tyr, Trp, His.
bool is_aromatic(int token);
// Hydrophobic set for surface composition: Ala, Val, Ile, Leu, Met, Phe,
// Trp, Pro.
bool is_hydrophobic(int token);

int net_charge(const std::vector<int>& tokens);

// True if the sequence contains a run of >= min_run consecutive histidines.
bool has_his_run(const std::vector<int>& tokens, int min_run = 5);

// Van der Waals radius by element symbol (case-insensitive); unlisted
// elements fall back to 1.8 A.  Values are defaults; the filter layer may
// override them from configuration.
double vdw_radius(const std::string& element);

// Reference maximum solvent-accessible surface area (A^2) of residue X in an
// extended Gly-X-Gly context, used for relative-exposure cutoffs.
double max_asa(int token);

}  // namespace mmdiff::protein
