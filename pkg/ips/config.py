import os
from fractions import Fraction

from dotenv import load_dotenv

load_dotenv()

# Trial division ceiling for squarefree_part
FACTOR_LIMIT = int(os.getenv("IPS_FACTOR_LIMIT", "1000000"))

# interval_sqrt default precision is 2**-SQRT_PRECISION_BITS
SQRT_PRECISION_BITS = int(os.getenv("IPS_SQRT_PRECISION_BITS", "64"))
SQRT_PRECISION = Fraction(1, 2 ** SQRT_PRECISION_BITS)

# Widest interval accepted for a certified constant
CONSTANT_WIDTH = Fraction(os.getenv("IPS_CONSTANT_WIDTH", "1e-12"))

# Square-container check tolerance 2**-CONTAINER_BITS
CONTAINER_BITS = int(os.getenv("IPS_CONTAINER_BITS", "40"))

MAX_K = int(os.getenv("IPS_MAX_K", "6"))

# Desk-scale guards for the exhaustive searches
SEARCH_MAX_N = int(os.getenv("IPS_SEARCH_MAX_N", "7"))
SEARCH_MAX_BMAX = int(os.getenv("IPS_SEARCH_MAX_BMAX", "50"))

JOBS = max(1, int(os.getenv("IPS_JOBS", "1")))
LOG_LEVEL = os.getenv("IPS_LOG_LEVEL", "WARNING").upper()

PACK_RESTARTS = int(os.getenv("IPS_PACK_RESTARTS", "16"))
PACK_ITERATIONS = int(os.getenv("IPS_PACK_ITERATIONS", "2000"))
