"""
Boolean expressions as polynomials
==================================

Every Boolean function has exactly one multilinear polynomial that agrees
with it on 0/1 inputs.  NOT becomes 1-x, AND becomes xy, OR becomes x+y-xy.
"""

from hazardscan import arithmetize, parse_expr, poly_to_bool
from hazardscan.expr import truth_table

# the OR of a variable and its complement collapses to the constant 1
print(arithmetize(parse_expr("x | !x")))

# De Morgan: !(!x | !y) and x & y give the same polynomial
print(arithmetize(parse_expr("!(!x | !y)")), "==", arithmetize(parse_expr("x & y")))

# XOR picks up a coefficient of -2
p = arithmetize(parse_expr("x ^ y"))
print(p)

# the polynomial is a truth table in disguise
print(truth_table(p))

# and it converts back to a sum of products
mux = arithmetize(parse_expr("x & b | !x & c"))
print(mux)
print(poly_to_bool(mux))
