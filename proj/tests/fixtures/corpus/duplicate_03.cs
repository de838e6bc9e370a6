using Xunit;

namespace Fixtures.Duplicate
{
    public class DistinctMessagesTests
    {
        [Fact]
        public void SameConditionDifferentMessage()
        {
            var gate = new Gate();
            gate.Open();
            Assert.True(gate.IsOpen, "gate opens");
            Assert.True(gate.IsOpen, "gate stays open");
        }
    }

    public class DistinctValuesTests
    {
        [Fact]
        public void DifferentExpectedValues()
        {
            var range = new Range(low, high);
            Assert.True(range.Contains(low), "low end included");
            Assert.False(range.Contains(high), "high end excluded");
        }

        private readonly int low = 1;
        private readonly int high = 9;
    }
}
