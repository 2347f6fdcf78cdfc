"""Coordinator: sums encrypted updates without any decryption capability."""

from typing import Dict, List, Optional

from loguru import logger

from paillier_accel.crypto.paillier import Ciphertext, PublicKey
from paillier_accel.engine.batch_engine import Engine, OperationKind
from paillier_accel.engine.batch_runner import BatchRunner
from paillier_accel.errors import EngineConfigError
from paillier_accel.fedsim.party import AggregateMessage, EncryptedUpdate


class Coordinator:
    """Registers parties and aggregates their ciphertexts with add_cipher batches."""

    def __init__(self, public_key: PublicKey, engine: Engine):
        if engine.private_key is not None:
            raise EngineConfigError("Coordinator engine must not hold a private key")
        self.public_key = public_key
        self.engine = engine
        self.parties: List[int] = []
        self.accumulator: Optional[List[Ciphertext]] = None
        self.last_iteration: Optional[int] = None

    def register(self, party_id: int) -> None:
        if party_id in self.parties:
            raise ValueError(f"Party {party_id} already registered")
        self.parties.append(party_id)
        logger.info(f"Coordinator registered party {party_id}")

    def aggregate(self, updates: List[EncryptedUpdate]) -> AggregateMessage:
        """Sum every registered party's update, element by element."""
        by_party: Dict[int, EncryptedUpdate] = {u.party_id: u for u in updates}
        if sorted(by_party) != sorted(self.parties) or len(updates) != len(self.parties):
            raise ValueError(f"Expected one update from each of {self.parties}, got {[u.party_id for u in updates]}")
        iterations = {u.iteration for u in updates}
        if len(iterations) != 1:
            raise ValueError(f"Updates from different iterations: {sorted(iterations)}")
        iteration = iterations.pop()
        lengths = {len(u.ciphertexts) for u in updates}
        if len(lengths) != 1:
            raise ValueError(f"Updates disagree on sample count: {sorted(lengths)}")
        for update in updates:
            for c in update.ciphertexts:
                if not isinstance(c, Ciphertext):
                    raise TypeError(f"Party {update.party_id} sent a non-ciphertext value")

        accumulator = list(by_party[self.parties[0]].ciphertexts)
        for party_id in self.parties[1:]:
            pairs = list(zip(accumulator, by_party[party_id].ciphertexts))
            runner = BatchRunner(self.engine, prefix=f"coord-add-it{iteration}-p{party_id}", summary=False)
            accumulator = runner.run_sync(OperationKind.ADD, pairs)

        self.accumulator = accumulator
        self.last_iteration = iteration
        logger.debug(f"Aggregated {len(self.parties)} updates for iteration {iteration}")
        return AggregateMessage(iteration=iteration, contributors=list(self.parties), ciphertexts=accumulator)
