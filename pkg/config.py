# Search budgets
DEFAULT_MAX_ELEMENTS = 10**6    # closure states before giving up
DEFAULT_MAX_LEN = 12            # product length for anytime bounds
BRUTE_BUDGET = 10**6            # products/words an oracle may enumerate
BRUTE_RHO_MAX_DIM = 8           # cycle enumeration is exponential in d

# Randomised corpora
DEFAULT_SEED = 20240229

# Matrix text format
BOTTOM_TOKENS = ("-i", "-inf")
BOTTOM_TEXT = "-inf"

# Output
FORMAT_TEXT = "text"
FORMAT_STRUCTURED = "structured"

# Letter added by star_extend
STAR_SYMBOL = "*"

# ── Counter machines ─────────────────────────────────────────
# Canonical spellings of c1+, c2+, c1-, c2-
INC_1 = "c1p"
INC_2 = "c2p"
DEC_1 = "c1m"
DEC_2 = "c2m"
COUNTER_ACTIONS = (INC_1, INC_2, DEC_1, DEC_2)

# a-blocks carry the first counter, b-blocks the second
LETTER_A = "a"
LETTER_B = "b"
CHECKER_ALPHABET = (LETTER_A, LETTER_B) + COUNTER_ACTIONS

# Upper bound on the gadget states added on top of the 2|Q| state checker
CHECKER_CONSTANT_STATES = 27

# NFA reduction alphabet, in emitted generator order (star appended)
NFA_ALPHABET = ("a", "b")
