class Billing {
    private int ledger;

    void chargeAll(int[] fees, int floor) {
        int paid = 0;
        for (int i = 0; i < fees.length; i++) {
            int fee = fees[i];
            if (fee > floor) {
                paid += fee;
            }
        }
        ledger += paid;
    }

    void refund(int amount) {
        int credit = amount;
        if (credit > ledger) {
            credit = ledger;
        }
        ledger -= credit;
    }
}
