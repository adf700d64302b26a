"""
Static hazard in Y = X1 X2 + !X3 X4
===================================

Four gates with equal delay tau.  X2 and X3 both fall at t=5, the function
stays 1, but the output drops for one gate delay.
"""

from hazardscan import Stimulus, classify, format_netlist
from hazardscan.corpus import fig1

n = fig1()
print(format_netlist(n))

# inputs in declaration order X1 X2 X3 X4
stim = Stimulus.from_bits(n, "1111", "1001", 5)
report = classify(n, stim)

# every intermediate signal, symbolically
for name, text in report.signals.items():
    print(f"{name:>3} = {text}")

print(report.summary())

# the same report as JSON
print(report.to_json())
