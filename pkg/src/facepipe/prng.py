"""PCG32: fixed, documented generator so committed fixtures and golden
files are reproducible on any platform (and from other languages).

Reference: O'Neill's pcg32 (XSH-RR output on a 64-bit LCG state,
multiplier 6364136223846793005).
"""

_MULT = 6364136223846793005
_MASK64 = (1 << 64) - 1


class Pcg32:
    def __init__(self, seed, seq=0):
        self.state = 0
        self.inc = ((seq << 1) | 1) & _MASK64
        self._step()
        self.state = (self.state + (seed & _MASK64)) & _MASK64
        self._step()

    def _step(self):
        self.state = (self.state * _MULT + self.inc) & _MASK64

    def next_u32(self):
        old = self.state
        self._step()
        xorshifted = (((old >> 18) ^ old) >> 27) & 0xFFFFFFFF
        rot = old >> 59
        return ((xorshifted >> rot) | (xorshifted << ((-rot) & 31))) & 0xFFFFFFFF

    def uniform(self):
        """Uniform in [0, 1)."""
        return self.next_u32() / 4294967296.0

    def uniforms(self, n):
        return [self.uniform() for _ in range(n)]
