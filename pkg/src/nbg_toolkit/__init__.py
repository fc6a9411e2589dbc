# src/nbg_toolkit/__init__.py
from nbg_toolkit.game_core import Game, InfluenceMatrix, MassDistribution, VertexCostFn, loadGame, saveGame
from nbg_toolkit.equilibrium import solveAffineBySupports, verifyDeltaStrong, verifyEquilibrium
