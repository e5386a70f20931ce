class Ledger {
    int count;
    double total;
    Report last;

    void record(double amount) {
        count = count + 1;
        total = total + amount;
    }

    int entries() {
        return count;
    }

    Report summarize() {
        Report r = new Report(total);
        last = r;
        r.publish();
        return r;
    }

    void reset() {
        /* clearing will also call audit.flush() once auditing lands */
        count = 0;
    }
}
