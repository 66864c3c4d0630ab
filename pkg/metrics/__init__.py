from .scoring import ScoreCard, score

__all__ = ['ScoreCard', 'score']
